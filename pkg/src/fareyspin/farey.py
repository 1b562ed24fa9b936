"""Modified Farey sequence on the hypercube group (Z/2Z)^k.

Level k holds 2^k + 1 fractions, built from 0/1 and 1/1 by inserting the
mediant (a+c)/(b+d) between every adjacent pair a/b, c/d of the previous
level.  Two independent routes compute the same numbers:

* the extended-row mediant recursion over indices 0..2^k (``extended_row``),
* the seeded complement-pair recursion evaluated per configuration
  (``seed_eval``), where seeds (1,1) give denominators and (0,1) numerators.

Configurations sigma in (Z/2Z)^k are encoded as integers with sigma_1 as the
most significant bit, so integer order equals lexicographic order and the
fraction sequence is increasing in the index.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import IO

import numpy as np

from .report import CheckReport

# Full-row materialization cap (2^26 + 1 int64 pairs ~ 1 GiB). int64 is exact
# far beyond any materializable level: max denominator is Fibonacci(k+2),
# below 2^63 for k <= 90, and the adjacent products formed by verify_row stay
# below 2^63 for k <= 44.
DEFAULT_MAX_LEVEL = 26


class LevelTooLargeError(ValueError):
    """Requested level exceeds the configured row-materialization cap."""


def _check_level(k: int) -> None:
    if k < 0:
        raise ValueError(f"level must be nonnegative, got {k}")


def _check_index(k: int, s: int, extended: bool = False) -> None:
    _check_level(k)
    top = (1 << k) if extended else (1 << k) - 1
    if not 0 <= s <= top:
        raise ValueError(f"index {s} out of range [0, {top}] at level {k}")


def index_to_bits(k: int, s: int) -> tuple[int, ...]:
    """Bit decomposition s = sum sigma_i 2^(k-i), most significant bit first."""
    _check_index(k, s)
    return tuple((s >> i) & 1 for i in range(k - 1, -1, -1))


def bits_to_index(bits) -> int:
    """Inverse of index_to_bits; rejects entries outside {0, 1}."""
    s = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bit values must be 0 or 1, got {b!r}")
        s = (s << 1) | b
    return s


def seed_pair(k: int, s0, s1, s: int) -> tuple:
    """Seeded-recursion values at the configuration index_to_bits(k, s) and at
    its bitwise complement.

    Level-1 base: (0) -> s0, (1) -> s1.  Appending bit b maps the pair
    (value, complement value) to (value + b*complement, complement + (1-b)*value).
    Arbitrary-precision throughout; seeds may be any integers (or Fractions).
    """
    if k < 1:
        raise ValueError(f"seed_pair requires level >= 1, got {k}")
    _check_index(k, s)
    if (s >> (k - 1)) & 1:
        a, b = s1, s0
    else:
        a, b = s0, s1
    for i in range(k - 2, -1, -1):
        if (s >> i) & 1:
            a = a + b
        else:
            b = a + b
    return a, b


def seed_eval(k: int, s0, s1, s: int):
    """Seeded-recursion value on the zero-prefixed configuration (0, bits of s).

    Seeds (1,1) give the level-k denominator and (0,1) the numerator of the
    s-th modified Farey fraction.
    """
    _check_index(k, s)
    a, b = s0, s1
    for i in range(k - 1, -1, -1):
        if (s >> i) & 1:
            a = a + b
        else:
            b = a + b
    return a


@dataclass(frozen=True)
class FareyRow:
    """Extended level-k row: numerators and denominators over indices 0..2^k.

    Arrays are read-only int64 and safe to share across threads.
    """

    level: int
    numerators: np.ndarray
    denominators: np.ndarray

    @property
    def size(self) -> int:
        return (1 << self.level) + 1

    def fraction(self, s: int) -> Fraction:
        _check_index(self.level, s, extended=True)
        return Fraction(int(self.numerators[s]), int(self.denominators[s]))


def _refine(values: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(values) - 1, dtype=np.int64)
    out[0::2] = values
    out[1::2] = values[:-1] + values[1:]
    return out


def extended_row(k: int, max_level: int | None = None) -> FareyRow:
    """Build the level-k row bottom-up by the mediant recursion."""
    _check_level(k)
    cap = DEFAULT_MAX_LEVEL if max_level is None else max_level
    if k > cap:
        raise LevelTooLargeError(
            f"level {k} exceeds the materialization cap {cap}; raise max_level to override"
        )
    num = np.array([0, 1], dtype=np.int64)
    den = np.array([1, 1], dtype=np.int64)
    for _ in range(k):
        num = _refine(num)
        den = _refine(den)
    num.setflags(write=False)
    den.setflags(write=False)
    return FareyRow(k, num, den)


def farey_value(k: int, s: int) -> Fraction:
    """Reduced fraction at extended index s of level k, in O(k) time and space."""
    _check_index(k, s, extended=True)
    if s == 1 << k:
        return Fraction(1)
    return Fraction(seed_eval(k, 0, 1, s), seed_eval(k, 1, 1, s))


def _first_failure(ok: np.ndarray) -> int | None:
    return None if bool(ok.all()) else int(np.argmax(~ok))


def verify_row(row: FareyRow) -> list[CheckReport]:
    """Check endpoints, strict monotonicity, unimodularity, and symmetry.

    Each property yields one CheckReport; the witness is the first failing
    index, if any.
    """
    num, den, k = row.numerators, row.denominators, row.level
    reports = []

    endpoints_ok = (
        num[0] == 0 and den[0] == 1 and num[-1] == 1 and den[-1] == 1 and len(num) == row.size
    )
    reports.append(
        CheckReport("row_endpoints", k, bool(endpoints_ok), witness=None if endpoints_ok else 0)
    )

    # Fractions increase strictly: num[s]*den[s+1] < num[s+1]*den[s].
    mono = num[:-1] * den[1:] < num[1:] * den[:-1]
    reports.append(CheckReport("row_monotone", k, bool(mono.all()), witness=_first_failure(mono)))

    unimodular = den[:-1] * num[1:] - den[1:] * num[:-1] == 1
    reports.append(
        CheckReport("row_unimodular", k, bool(unimodular.all()), witness=_first_failure(unimodular))
    )

    # Reflection s -> 2^k - s fixes denominators and sends values to 1 - value.
    symmetric = (num + num[::-1] == den) & (den == den[::-1])
    reports.append(
        CheckReport("row_symmetric", k, bool(symmetric.all()), witness=_first_failure(symmetric))
    )
    return reports


def cross_check_routes(k: int, max_level: int | None = None) -> bool:
    """True iff the mediant row and the seeded recursion agree at all 2^k indices."""
    row = extended_row(k, max_level)
    nums = row.numerators.tolist()
    dens = row.denominators.tolist()
    for s in range(1 << k):
        a, b = 0, 1
        c, d = 1, 1
        for i in range(k - 1, -1, -1):
            if (s >> i) & 1:
                a += b
                c += d
            else:
                b += a
                d += c
        if a != nums[s] or c != dens[s]:
            return False
    return True


def write_row_csv(row: FareyRow, stream: IO[str]) -> None:
    """Emit index, numerator, denominator, value with '.' decimals, one row per index."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["index", "numerator", "denominator", "value"])
    for i, (n, d) in enumerate(zip(row.numerators.tolist(), row.denominators.tolist())):
        writer.writerow([i, n, d, repr(n / d)])
