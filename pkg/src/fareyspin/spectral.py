"""Walsh-Hadamard transform on (Z/2Z)^k and interaction coefficients.

The normalized transform of f is (Tf)(tau) = 2^-k sum_s (-1)^popcount(s & tau) f(s),
with the same most-significant-bit-first index convention as the Farey rows.
Interaction coefficients are the negated normalized transform of the fraction
values.  Exact mode carries rationals end to end; float mode is double
precision with a fixed butterfly order, so outputs are bit-identical across
runs.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Sequence

import numpy as np

from .farey import extended_row

# Exact-path level cap: 4096 entries keeps rational transforms instantaneous.
K_EXACT = 12

_NAIVE_CAP = 12


def _check_power_of_two(n: int) -> int:
    if n <= 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    return n.bit_length() - 1


def _fwht_array(a: np.ndarray, normalize: bool) -> np.ndarray:
    if a.ndim != 1:
        raise ValueError("fwht expects a one-dimensional array")
    if not a.flags.c_contiguous:
        # reshape would copy and the in-place butterflies would be lost
        raise ValueError("fwht operates in place and needs a contiguous array")
    bits = _check_power_of_two(a.size)
    if normalize and not (np.issubdtype(a.dtype, np.floating) or np.issubdtype(a.dtype, np.complexfloating)):
        raise ValueError("normalized fwht on arrays requires a floating or complex dtype")
    h = 1
    while h < a.size:
        b = a.reshape(-1, 2, h)
        low = b[:, 0, :] - b[:, 1, :]
        b[:, 0, :] += b[:, 1, :]
        b[:, 1, :] = low
        h *= 2
    if normalize:
        a *= 2.0 ** -bits  # power-of-two scaling, exact in IEEE
    return a


def _normalize_entry(v, scale: int):
    if isinstance(v, (int, Fraction)):
        return Fraction(v, scale)
    return v / scale


def _fwht_list(values: list, normalize: bool) -> list:
    n = len(values)
    _check_power_of_two(n)
    h = 1
    while h < n:
        for block in range(0, n, 2 * h):
            for j in range(block, block + h):
                x, y = values[j], values[j + h]
                values[j] = x + y
                values[j + h] = x - y
        h *= 2
    if normalize:
        for i in range(n):
            values[i] = _normalize_entry(values[i], n)
    return values


def fwht(values, normalize: bool = False):
    """In-place butterfly Walsh-Hadamard transform; returns its argument.

    Accepts a 1-D numpy array (vectorized stages) or a mutable sequence of
    numbers, including exact Fractions.  With ``normalize`` the result is
    scaled by 2^-n for length 2^n; exact entries stay exact.
    """
    if isinstance(values, np.ndarray):
        return _fwht_array(values, normalize)
    return _fwht_list(values, normalize)


def naive_transform(values, normalize: bool = False):
    """Direct O(4^n) character sum; the oracle the fast transform is tested against."""
    n = len(values)
    bits = _check_power_of_two(n)
    if bits > _NAIVE_CAP:
        raise ValueError(f"naive transform capped at 2^{_NAIVE_CAP} points")
    out = []
    for t in range(n):
        acc = 0
        for s in range(n):
            if (s & t).bit_count() & 1:
                acc = acc - values[s]
            else:
                acc = acc + values[s]
        out.append(acc)
    if normalize:
        out = [_normalize_entry(v, n) for v in out]
    if isinstance(values, np.ndarray):
        return np.array(out)
    return out


def rational_wht(values: Sequence, normalize: bool = False) -> list[Fraction]:
    """Exact transform of rational inputs via a common-denominator integer butterfly.

    Same butterfly order as fwht, so it computes the identical sum tree, just
    over arbitrary-precision integers scaled by the lcm of the denominators.
    """
    fracs = [Fraction(v) for v in values]
    _check_power_of_two(len(fracs))
    common = math.lcm(*{f.denominator for f in fracs})
    ints = [f.numerator * (common // f.denominator) for f in fracs]
    _fwht_list(ints, False)
    div = common * (len(fracs) if normalize else 1)
    return [Fraction(v, div) for v in ints]


@dataclass(frozen=True)
class Spectrum:
    """Interaction coefficients of one level, indexed by the bitmask of tau."""

    level: int
    mode: str
    values: object  # list[Fraction] in exact mode, read-only float64 array in float mode

    def __len__(self) -> int:
        return 1 << self.level

    def __getitem__(self, mask: int):
        return self.values[mask]


def interaction(
    k: int, mode: str = "exact", *, k_exact: int = K_EXACT, max_level: int | None = None
) -> Spectrum:
    """Interaction coefficients: the negated normalized transform of the level-k values."""
    if mode == "exact":
        if k > k_exact:
            raise ValueError(
                f"exact mode supports levels up to {k_exact}; use float mode for level {k}"
            )
        row = extended_row(k, max_level)
        fractions = [
            Fraction(int(n), int(d))
            for n, d in zip(row.numerators[:-1].tolist(), row.denominators[:-1].tolist())
        ]
        transformed = rational_wht(fractions, normalize=True)
        return Spectrum(k, "exact", [-v for v in transformed])
    if mode == "float":
        row = extended_row(k, max_level)
        values = row.numerators[:-1] / row.denominators[:-1]
        fwht(values, normalize=True)
        np.negative(values, out=values)
        values.setflags(write=False)
        return Spectrum(k, "float", values)
    raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")


def max_support(mask: int, k: int) -> int:
    """Largest set coordinate of a level-k mask (1-based, counted from the left)."""
    if not 0 < mask < 1 << k:
        raise ValueError(f"mask {mask} out of range for level {k}")
    trailing = (mask & -mask).bit_length() - 1
    return k - trailing


def tau_mask(positions, k: int) -> int:
    """Level-k bitmask of a coordinate set; position i maps to bit 2^(k-i)."""
    mask = 0
    for p in positions:
        if not 1 <= p <= k:
            raise ValueError(f"support position {p} exceeds level {k}")
        mask |= 1 << (k - p)
    return mask


@dataclass(frozen=True)
class LimitEstimate:
    """Level-k estimate of the limiting interaction at a finite-support mask.

    error_bound = 2^-k is the geometric sum of the proven per-step increments
    2^-(m+1) for m >= k; it bounds |limit - value|.
    """

    tau: tuple[int, ...]
    level_used: int
    value: object
    error_bound: float


def limit_estimate(
    tau, k: int, mode: str | None = None, *, k_exact: int = K_EXACT, max_level: int | None = None
) -> LimitEstimate:
    """Evaluate the level-k coefficient at the projection of tau, with tail bound."""
    positions = tuple(sorted({int(p) for p in tau}))
    mask = tau_mask(positions, k)
    if mode is None:
        mode = "exact" if k <= k_exact else "float"
    spectrum = interaction(k, mode, k_exact=k_exact, max_level=max_level)
    return LimitEstimate(positions, k, spectrum[mask], 2.0**-k)


def write_spectrum_csv(spectrum: Spectrum, stream: IO[str]) -> None:
    """Emit tau_index, tau_bits, j_value, decay_bound; exact values as 'p/q' strings."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["tau_index", "tau_bits", "j_value", "decay_bound"])
    k = spectrum.level
    for i in range(len(spectrum)):
        v = spectrum.values[i]
        if spectrum.mode == "exact":
            text = f"{v.numerator}/{v.denominator}"
        else:
            text = repr(float(v))
        bound = "" if i == 0 else repr(2.0 ** -max_support(i, k))
        writer.writerow([i, format(i, f"0{max(k, 1)}b"), text, bound])
