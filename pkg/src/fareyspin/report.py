"""Uniform pass/fail records for the machine checks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check: the worst observed margin and the index attaining it.

    ``margin`` is exact (a Fraction) when the check ran in exact mode and a
    float otherwise; ``witness`` is the tau or s index at which the margin is
    attained, or the first counterexample on failure.
    """

    name: str
    level: int | None
    passed: bool
    margin: float | Fraction | None = None
    witness: int | None = None

    def to_dict(self) -> dict:
        if self.margin is None:
            margin = None
        else:
            try:
                margin = float(self.margin)
            except OverflowError:
                margin = math.inf if self.margin > 0 else -math.inf
        return {
            "name": self.name,
            "level": self.level,
            "pass": self.passed,
            "margin": margin,
            "witness": self.witness,
        }


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)
