"""Machine checks of the sign structure of the interaction coefficients.

Every quantitative statement about the spectra is an executable check
returning a CheckReport: the closed form at tau = 0, nonnegativity off zero,
the extreme masks, the support-decay bound, the level-increment bound, the
reciprocal-sum identity, and the cone argument (a bounded observable whose
transform is nonnegative everywhere, which forces the off-zero signs).
Exact mode admits zero tolerance; float mode defaults to 1e-12.
"""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .farey import cross_check_routes, extended_row, seed_eval, seed_pair, verify_row
from .report import CheckReport
from .spectral import K_EXACT, Spectrum, interaction, max_support, rational_wht

DEFAULT_SEED = 1729


def _resolve(k, mode, spectrum, k_exact, max_level) -> Spectrum:
    if spectrum is not None:
        if spectrum.level != k:
            raise ValueError(f"spectrum is for level {spectrum.level}, expected {k}")
        return spectrum
    return interaction(k, mode, k_exact=k_exact, max_level=max_level)


def _tolerance(spectrum: Spectrum, tol):
    if tol is not None:
        return tol
    return 0 if spectrum.mode == "exact" else 1e-12


def check_zero_coefficient(
    k, mode="exact", *, tol=None, spectrum=None, k_exact=K_EXACT, max_level=None
) -> CheckReport:
    """The tau = 0 coefficient equals -(1 - 2^-k)/2 (the negated mean of the values)."""
    if k < 1:
        raise ValueError("checks require level >= 1")
    sp = _resolve(k, mode, spectrum, k_exact, max_level)
    tol = _tolerance(sp, tol)
    if sp.mode == "exact":
        closed = Fraction(-((1 << k) - 1), 1 << (k + 1))
    else:
        closed = -(1.0 - 2.0**-k) / 2.0
    error = abs(sp[0] - closed)
    return CheckReport("zero_coefficient", k, error <= tol, margin=error, witness=0)


def check_nonnegativity(
    k, mode="exact", *, tol=None, spectrum=None, k_exact=K_EXACT, max_level=None
) -> CheckReport:
    """Every coefficient off tau = 0 is nonnegative; margin is the spectrum minimum off zero."""
    if k < 1:
        raise ValueError("checks require level >= 1")
    sp = _resolve(k, mode, spectrum, k_exact, max_level)
    tol = _tolerance(sp, tol)
    if sp.mode == "float":
        off = sp.values[1:]
        i = int(np.argmin(off))
        worst = float(off[i])
    else:
        i, worst = min(
            ((j, v) for j, v in enumerate(sp.values[1:])), key=lambda item: item[1]
        )
    return CheckReport("off_zero_nonnegative", k, worst >= -tol, margin=worst, witness=i + 1)


def check_extremes(
    k, mode="exact", *, tol=None, spectrum=None, k_exact=K_EXACT, max_level=None
) -> CheckReport:
    """tau = 0 is the strict minimum and tau = (1,0,...,0) attains the maximum.

    Margin is the smaller of the two worst slacks (gap above the minimum, gap
    below the maximum); ties with the maximum are allowed, ties with the
    minimum are not.
    """
    if k < 1:
        raise ValueError("checks require level >= 1")
    sp = _resolve(k, mode, spectrum, k_exact, max_level)
    top_mask = 1 << (k - 1)
    vals = sp.values
    if sp.mode == "float":
        gaps_min = vals[1:] - vals[0]
        i_min = int(np.argmin(gaps_min))
        min_slack = float(gaps_min[i_min])
        gaps_max = vals[top_mask] - vals
        gaps_max[top_mask] = np.inf  # the maximum candidate itself is not a competitor
        i_max = int(np.argmin(gaps_max))
        max_slack = float(gaps_max[i_max])
    else:
        i_min, min_slack = min(
            ((j, v - vals[0]) for j, v in enumerate(vals[1:])), key=lambda item: item[1]
        )
        i_max, max_slack = min(
            ((j, vals[top_mask] - v) for j, v in enumerate(vals) if j != top_mask),
            key=lambda item: item[1],
        )
    passed = min_slack > 0 and max_slack >= 0
    if min_slack <= max_slack:
        margin, witness = min_slack, i_min + 1
    else:
        margin, witness = max_slack, i_max
    return CheckReport("extreme_masks", k, bool(passed), margin=margin, witness=witness)


def check_decay(
    k, mode="exact", *, tol=None, spectrum=None, k_exact=K_EXACT, max_level=None
) -> CheckReport:
    """Each off-zero coefficient is at most 2^-max(supp(tau)); margin is the worst slack."""
    if k < 1:
        raise ValueError("checks require level >= 1")
    sp = _resolve(k, mode, spectrum, k_exact, max_level)
    tol = _tolerance(sp, tol)
    if sp.mode == "float":
        idx = np.arange(1, 1 << k, dtype=np.int64)
        trailing = np.log2((idx & -idx).astype(np.float64)).astype(np.int64)
        bounds = 2.0 ** (trailing - k)
        slack = bounds - sp.values[1:]
        i = int(np.argmin(slack))
        worst = float(slack[i])
    else:
        i, worst = min(
            (
                (m - 1, Fraction(1, 1 << max_support(m, k)) - sp.values[m])
                for m in range(1, 1 << k)
            ),
            key=lambda item: item[1],
        )
    return CheckReport("support_decay", k, worst >= -tol, margin=worst, witness=i + 1)


def check_convergence(
    k,
    mode="exact",
    *,
    tol=None,
    spectrum=None,
    next_spectrum=None,
    k_exact=K_EXACT,
    max_level=None,
) -> CheckReport:
    """|coefficient at level k - its zero-extension at level k+1| <= 2^-(k+1) for every mask."""
    if k < 1:
        raise ValueError("checks require level >= 1")
    sp = _resolve(k, mode, spectrum, k_exact, max_level)
    nxt = _resolve(k + 1, sp.mode, next_spectrum, k_exact, max_level)
    if nxt.mode != sp.mode:
        raise ValueError("convergence check needs both spectra in the same mode")
    tol = _tolerance(sp, tol)
    if sp.mode == "float":
        # appending a zero bit doubles the mask, i.e. even indices one level up
        slack = 2.0 ** -(k + 1) - np.abs(sp.values - nxt.values[0::2])
        i = int(np.argmin(slack))
        worst = float(slack[i])
    else:
        bound = Fraction(1, 1 << (k + 1))
        i, worst = min(
            ((m, bound - abs(sp.values[m] - nxt.values[m << 1])) for m in range(1 << k)),
            key=lambda item: item[1],
        )
    return CheckReport("level_increment", k, worst >= -tol, margin=worst, witness=i)


def reciprocal_sum(k: int, max_level=None) -> Fraction:
    """Exact sum of 1/(den(s) * den(s+1)) over the level-k row; the identity value is 1."""
    if k < 1:
        raise ValueError("reciprocal_sum requires level >= 1")
    dens = extended_row(k, max_level).denominators.tolist()
    total = Fraction(0)
    for s in range(1 << k):
        total += Fraction(1, dens[s] * dens[s + 1])
    return total


def check_reciprocal_sum(k, *, max_level=None) -> CheckReport:
    total = reciprocal_sum(k, max_level)
    return CheckReport("reciprocal_sum", k, total == 1, margin=abs(total - 1))


def cone_observable(k: int) -> list[Fraction]:
    """The bounded observable with seeds (1,-1) over (1,1), equal to 1 - 2*value pointwise.

    Its normalized transform is nonnegative at every mask (membership in the
    multiplicative cone), which is what forces the off-zero coefficient signs.
    """
    if k < 1:
        raise ValueError("cone_observable requires level >= 1")
    return [
        Fraction(seed_eval(k, 1, -1, s), seed_eval(k, 1, 1, s)) for s in range(1 << k)
    ]


def check_cone_membership(k, *, k_exact=K_EXACT) -> CheckReport:
    """All 2^k transform coefficients of the cone observable are >= 0, exactly."""
    if k > k_exact:
        raise ValueError(f"cone membership is an exact check; level capped at {k_exact}")
    transformed = rational_wht(cone_observable(k), normalize=True)
    i, worst = min(enumerate(transformed), key=lambda item: item[1])
    return CheckReport("cone_membership", k, worst >= 0, margin=worst, witness=i)


def check_spectrum_decomposition(
    k, *, spectrum=None, k_exact=K_EXACT, max_level=None
) -> CheckReport:
    """Exact identity: coefficient(tau) = -1/2*[tau=0] + 1/2*transform(cone observable)(tau)."""
    sp = _resolve(k, "exact", spectrum, k_exact, max_level)
    if sp.mode != "exact":
        raise ValueError("decomposition is an exact check")
    transformed = rational_wht(cone_observable(k), normalize=True)
    worst = Fraction(0)
    witness = None
    for m in range(1 << k):
        expected = transformed[m] / 2 - (Fraction(1, 2) if m == 0 else 0)
        dev = abs(sp.values[m] - expected)
        if dev > worst:
            worst, witness = dev, m
    return CheckReport("spectrum_decomposition", k, worst == 0, margin=worst, witness=witness)


# The two fractional-linear maps that express shifted-seed ratios through the
# cone observable w: m1(w) = seeds(1,0)/seeds(1,2) and m2(w) = seeds(0,-1)/seeds(2,1).
# Their sum and difference have nonnegative Taylor coefficients at 0, which is
# the property the cone argument needs.

def cone_map_plus(x) -> Fraction:
    """m1 + m2 = 8x/(9 - x^2), for |x| < 3."""
    x = Fraction(x)
    return 8 * x / (9 - x * x)


def cone_map_minus(x) -> Fraction:
    """m1 - m2 = (2x^2 + 6)/(9 - x^2), for |x| < 3."""
    x = Fraction(x)
    return (2 * x * x + 6) / (9 - x * x)


def _poly_step(p: list[int], n: int) -> list[int]:
    # next numerator polynomial: 9*p' - x^2*p' + 2*(n+1)*x*p
    dp = [i * c for i, c in enumerate(p)][1:]
    q = [0] * (len(p) + 1)
    for i, c in enumerate(dp):
        q[i] += 9 * c
        q[i + 2] -= c
    for i, c in enumerate(p):
        q[i + 1] += 2 * (n + 1) * c
    while q and q[-1] == 0:
        q.pop()
    return q


def cone_map_polynomials(n_max: int) -> tuple[list[list[int]], list[list[int]]]:
    """Numerator polynomials of the n-th derivatives of the sum and difference maps.

    The n-th derivative is (-1)^(n+1) * p_n(x) / (x^2 - 9)^(n+1) with
    deg(p_n) <= n + 2; the recursion keeps every coefficient nonnegative.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    p_plus, p_minus = [0, 8], [6, 0, 2]
    out_plus, out_minus = [], []
    for n in range(n_max + 1):
        out_plus.append(list(p_plus))
        out_minus.append(list(p_minus))
        p_plus = _poly_step(p_plus, n)
        p_minus = _poly_step(p_minus, n)
    return out_plus, out_minus


def _factorials(n_max: int) -> list[int]:
    out = [1]
    for n in range(1, n_max + 1):
        out.append(out[-1] * n)
    return out


def cone_map_series(n_max: int) -> tuple[list[Fraction], list[Fraction]]:
    """Taylor coefficients at 0 of the sum and difference maps, via the derivative recursion."""
    polys_plus, polys_minus = cone_map_polynomials(n_max)
    fact = _factorials(n_max)

    def coeff(p, n):
        return Fraction(p[0] if p else 0, 9 ** (n + 1) * fact[n])

    return (
        [coeff(p, n) for n, p in enumerate(polys_plus)],
        [coeff(p, n) for n, p in enumerate(polys_minus)],
    )


def cone_map_series_closed(n_max: int) -> tuple[list[Fraction], list[Fraction]]:
    """Same coefficients from the geometric expansions of the closed forms; the oracle route."""
    plus = [
        Fraction(8, 9 ** (n // 2 + 1)) if n % 2 else Fraction(0) for n in range(n_max + 1)
    ]
    minus = [Fraction(0)] * (n_max + 1)
    minus[0] = Fraction(2, 3)
    for m in range(1, n_max // 2 + 1):
        minus[2 * m] = Fraction(24, 9 ** (m + 1))
    return plus, minus


def check_cone_map_series(n_max: int = 40) -> CheckReport:
    """Derivative-recursion coefficients are >= 0, respect the degree bound, and
    agree exactly with the geometric closed forms up to degree n_max."""
    polys_plus, polys_minus = cone_map_polynomials(n_max)
    degree_ok = all(
        len(p) - 1 <= n + 2 for n, p in enumerate(polys_plus + polys_minus) if p
    )
    poly_min = min(min(p) for p in polys_plus + polys_minus if p)
    series = cone_map_series(n_max)
    closed = cone_map_series_closed(n_max)
    series_min = min(min(series[0]), min(series[1]))
    passed = degree_ok and poly_min >= 0 and series == closed and series_min >= 0
    return CheckReport("cone_map_series", n_max, bool(passed), margin=series_min)


def check_cone_map_identities(k, *, k_exact=K_EXACT) -> CheckReport:
    """Pointwise exact identities m1(w) = seeds(1,0)/seeds(1,2), m2(w) = seeds(0,-1)/seeds(2,1)."""
    if not 1 <= k <= k_exact:
        raise ValueError(f"identity check runs exactly for 1 <= k <= {k_exact}")
    witness = None
    for s in range(1 << k):
        w = Fraction(seed_eval(k, 1, -1, s), seed_eval(k, 1, 1, s))
        m1 = (w + 1) / (3 - w)
        m2 = (w - 1) / (w + 3)
        if m1 != Fraction(seed_eval(k, 1, 0, s), seed_eval(k, 1, 2, s)):
            witness = s
            break
        if m2 != Fraction(seed_eval(k, 0, -1, s), seed_eval(k, 2, 1, s)):
            witness = s
            break
    return CheckReport(
        "cone_map_identities", k, witness is None, margin=Fraction(0), witness=witness
    )


def check_seed_identities(trials: int = 1000, seed: int = DEFAULT_SEED) -> CheckReport:
    """Randomized exact tests of the seed-linearity and two-stage-composition identities.

    Linearity: seeds (s0,s1) decompose as s0*seeds(1,0) + s1*seeds(0,1).
    Composition: evaluating k+l bits at once equals re-seeding with the level-k
    pair and evaluating the remaining l bits.  The seed is recorded in the
    report name.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    witness = None
    for trial in range(trials):
        s0, s1 = rng.randint(-10, 10), rng.randint(-10, 10)

        k = rng.randint(1, 12)
        s = rng.randrange(1 << k)
        lin = s0 * seed_eval(k, 1, 0, s) + s1 * seed_eval(k, 0, 1, s)
        if seed_eval(k, s0, s1, s) != lin:
            witness = trial
            break

        k = rng.randint(1, 11)
        l = rng.randint(0, 12 - k)
        s_head = rng.randrange(1 << k)
        s_tail = rng.randrange(1 << l)
        a, b = seed_pair(k, s0, s1, s_head)
        direct = seed_pair(k + l, s0, s1, (s_head << l) | s_tail)[0]
        if direct != seed_eval(l, a, b, s_tail):
            witness = trial
            break
    return CheckReport(
        f"seed_identities(trials={trials},seed={seed})",
        None,
        witness is None,
        margin=Fraction(0),
        witness=witness,
    )


def verify_suite(
    k_max: int = 12,
    *,
    k_exact: int = K_EXACT,
    tol: float = 1e-12,
    trials: int = 1000,
    seed: int = DEFAULT_SEED,
    series_degree: int = 40,
    max_level=None,
) -> list[CheckReport]:
    """Run every check for k = 1..k_max plus the level-free checks.

    Levels up to k_exact run in exact mode with zero tolerance, higher levels
    in float mode with tolerance ``tol``.  The heavier exact identities are
    capped at their verification envelopes: reciprocal sums at level 18 and
    the dual-route row comparison at level 16.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    reports: list[CheckReport] = []
    spectra: dict[tuple[int, str], Spectrum] = {}

    def spectrum_at(k: int, mode: str) -> Spectrum:
        key = (k, mode)
        if key not in spectra:
            spectra[key] = interaction(k, mode, k_exact=k_exact, max_level=max_level)
        return spectra[key]

    for k in range(1, k_max + 1):
        mode = "exact" if k <= k_exact else "float"
        reports.extend(verify_row(extended_row(k, max_level)))
        if k <= 16:
            reports.append(
                CheckReport("dual_route_agreement", k, cross_check_routes(k, max_level))
            )
        sp = spectrum_at(k, mode)
        reports.append(check_zero_coefficient(k, spectrum=sp, tol=None if mode == "exact" else tol))
        reports.append(check_nonnegativity(k, spectrum=sp, tol=None if mode == "exact" else tol))
        reports.append(check_extremes(k, spectrum=sp))
        reports.append(check_decay(k, spectrum=sp, tol=None if mode == "exact" else tol))
        if k < k_max:
            pair_mode = "exact" if k + 1 <= k_exact else "float"
            reports.append(
                check_convergence(
                    k,
                    spectrum=spectrum_at(k, pair_mode),
                    next_spectrum=spectrum_at(k + 1, pair_mode),
                    tol=None if pair_mode == "exact" else tol,
                )
            )
        if k <= 18:
            reports.append(check_reciprocal_sum(k, max_level=max_level))
        if mode == "exact":
            reports.append(check_cone_membership(k, k_exact=k_exact))
            reports.append(check_spectrum_decomposition(k, spectrum=sp, k_exact=k_exact))
            reports.append(check_cone_map_identities(k, k_exact=k_exact))
    reports.append(check_cone_map_series(series_degree))
    reports.append(check_seed_identities(trials, seed))
    return reports
