"""Exact-rational table of the known first-selection constants.

For each dimension d the table carries, as exact rationals:

* barany            (d+1)^-d        original lower bound on c_d
* wagner            (d^2+1)/(d+1)^(d+1)   improved lower bound
* karasev_uncolored 1/(d+1)!        baseline colorful lower bound
* gromov            2d/((d+1)(d+1)!)  topological lower bound
* upper_bmn         d!/(d+1)^d      stretched-grid upper bound

At d = 3 the row also quotes the best published interval for c_3 as a pair
of exact decimals (reference values from the literature, not formulas).

parity_gap_lemma_check verifies, in exact arithmetic, the inequality
a(1-b) + (1-a)b >= 2x(1-x) with x = (a+b)/2, whose gap is (a-b)^2/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import NonpositiveDimension, OutOfRange
from .geometry import as_fraction

C3_INTERVAL = (Fraction(7480, 100000), Fraction(9375, 100000))


@dataclass(frozen=True)
class BoundsRow:
    d: int
    barany: Fraction
    wagner: Fraction
    karasev_uncolored: Fraction
    gromov: Fraction
    upper_bmn: Fraction
    c3_interval: Optional[tuple[Fraction, Fraction]] = None

    def to_json(self) -> dict:
        from .dataio import format_rational

        doc = {
            "d": self.d,
            "barany": format_rational(self.barany),
            "wagner": format_rational(self.wagner),
            "karasev_uncolored": format_rational(self.karasev_uncolored),
            "gromov": format_rational(self.gromov),
            "upper_bmn": format_rational(self.upper_bmn),
        }
        if self.c3_interval is not None:
            doc["c3_interval"] = [format_rational(v) for v in self.c3_interval]
        return doc


def bounds_row(d: int) -> BoundsRow:
    """The exact constants for dimension d (d >= 1)."""
    if d < 1:
        raise NonpositiveDimension(f"d must be >= 1, got {d}")
    return BoundsRow(
        d=d,
        barany=Fraction(1, (d + 1) ** d),
        wagner=Fraction(d * d + 1, (d + 1) ** (d + 1)),
        karasev_uncolored=Fraction(1, math.factorial(d + 1)),
        gromov=Fraction(2 * d, (d + 1) * math.factorial(d + 1)),
        upper_bmn=Fraction(math.factorial(d), (d + 1) ** d),
        c3_interval=C3_INTERVAL if d == 3 else None,
    )


@dataclass(frozen=True)
class ParityGapReport:
    lhs: Fraction
    rhs: Fraction
    holds: bool

    @property
    def gap(self) -> Fraction:
        return self.lhs - self.rhs


def parity_gap_lemma_check(a, b) -> ParityGapReport:
    """Exact check of a(1-b) + (1-a)b >= 2x(1-x) at x = (a+b)/2 for a, b in [0,1]."""
    a = as_fraction(a)
    b = as_fraction(b)
    if not (0 <= a <= 1) or not (0 <= b <= 1):
        raise OutOfRange(f"a and b must lie in [0, 1], got a={a}, b={b}")
    lhs = a * (1 - b) + (1 - a) * b
    x = (a + b) / 2
    rhs = 2 * x * (1 - x)
    return ParityGapReport(lhs=lhs, rhs=rhs, holds=lhs >= rhs)
