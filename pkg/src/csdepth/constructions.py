"""Instance generators for depth experiments.

All generators emit exact rational coordinates (random draws land on a fixed
grid), color points by a configurable policy, and guarantee general position
on output: random kinds redraw with derived seeds, grid-like kinds break
their built-in collinearity with a deterministic exact perturbation first.
Same spec in, same instance out.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import Union

from .errors import DimensionNotTwo, GeneralPositionUnreachable, OutOfRange
from .geometry import ColoredPointSet, Point, as_fraction, general_position_check, perturb
from .rng import make_rng

# Random coordinates land on multiples of 1/COORD_GRID. Coarse enough to keep
# downstream exact arithmetic fast, fine enough that degeneracies are rare.
COORD_GRID = 1000

MAX_RETRIES = 32


class Coloring(str, Enum):
    ROUND_ROBIN = "RoundRobin"
    RANDOM_BALANCED = "RandomBalanced"


@dataclass(frozen=True)
class UniformRandom:
    """i.i.d. uniform points in an axis-aligned box (default unit box)."""

    lo: tuple[Fraction, ...] = ()
    hi: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class GaussianRandom:
    """i.i.d. standard normal points, rounded to the coordinate grid."""


@dataclass(frozen=True)
class StretchedGrid:
    """Planar grid (i, gamma^j) with geometrically growing rows.

    The single-axis geometric stretching approximates the steeply growing
    extremal constructions; larger gamma gets closer to their regime.
    """

    gamma: Fraction = Fraction(10)


@dataclass(frozen=True)
class MomentCurve:
    """Points (t, t^2, ..., t^d) at distinct integer parameters."""


GeneratorKind = Union[UniformRandom, GaussianRandom, StretchedGrid, MomentCurve]


@dataclass(frozen=True)
class GeneratorSpec:
    kind: GeneratorKind
    n_per_color: int
    dim: int
    seed: int
    coloring: Coloring = Coloring.ROUND_ROBIN

    def __post_init__(self):
        if self.n_per_color < 1:
            raise OutOfRange(f"n_per_color must be >= 1, got {self.n_per_color}")
        if self.dim < 1:
            raise OutOfRange(f"dim must be >= 1, got {self.dim}")


def _color_points(
    points: list[Point], d: int, n: int, coloring: Coloring, rng
) -> ColoredPointSet:
    idx = list(range(len(points)))
    if coloring == Coloring.RANDOM_BALANCED:
        idx = [int(i) for i in rng.permutation(len(points))]
        classes = [tuple(points[i] for i in idx[k * n : (k + 1) * n]) for k in range(d + 1)]
    else:
        classes = [tuple(points[i] for i in idx if i % (d + 1) == k) for k in range(d + 1)]
    return ColoredPointSet(tuple(classes))


def _grid_fraction(rng, lo: Fraction, hi: Fraction) -> Fraction:
    k = int(rng.integers(0, COORD_GRID + 1))
    return lo + (hi - lo) * Fraction(k, COORD_GRID)


def generate(spec: GeneratorSpec) -> ColoredPointSet:
    """Generate a general-position ColoredPointSet per the spec; deterministic."""
    d = spec.dim
    n = spec.n_per_color
    m = (d + 1) * n
    kind = spec.kind

    if isinstance(kind, (UniformRandom, GaussianRandom)):
        for attempt in range(MAX_RETRIES):
            rng = make_rng(_derived_seed(spec.seed, attempt))
            if isinstance(kind, UniformRandom):
                lo = tuple(as_fraction(v) for v in kind.lo) or tuple(Fraction(0) for _ in range(d))
                hi = tuple(as_fraction(v) for v in kind.hi) or tuple(Fraction(1) for _ in range(d))
                if len(lo) != d or len(hi) != d or any(l >= h for l, h in zip(lo, hi)):
                    raise OutOfRange("box must satisfy lo < hi on every axis")
                points = [
                    Point(tuple(_grid_fraction(rng, lo[i], hi[i]) for i in range(d)))
                    for _ in range(m)
                ]
            else:
                draws = rng.standard_normal((m, d))
                points = [
                    Point(tuple(Fraction(round(x * COORD_GRID), COORD_GRID) for x in row))
                    for row in draws
                ]
            cps = _color_points(points, d, n, spec.coloring, rng)
            if general_position_check(cps).ok:
                return cps
        raise GeneralPositionUnreachable(
            f"no general-position draw after {MAX_RETRIES} attempts (seed {spec.seed})"
        )

    if isinstance(kind, StretchedGrid):
        if d != 2:
            raise DimensionNotTwo("stretched grid is a planar construction")
        gamma = as_fraction(kind.gamma)
        if gamma < 2:
            raise OutOfRange(f"gamma must be >= 2, got {gamma}")
        side = isqrt(m)  # smallest side with side^2 >= m
        while side * side < m:
            side += 1
        base = []
        for j in range(side):
            y = gamma**j
            for i in range(side):
                base.append(Point((Fraction(i), y)))
                if len(base) == m:
                    break
            if len(base) == m:
                break
        magnitude = Fraction(1, 1000) / gamma**side
        rng = make_rng(spec.seed)
        cps0 = _color_points(base, d, n, spec.coloring, rng)
        for attempt in range(MAX_RETRIES):
            cps = perturb(cps0, _derived_seed(spec.seed, attempt), magnitude)
            if general_position_check(cps).ok:
                return cps
        raise GeneralPositionUnreachable(
            f"grid perturbation failed to reach general position after {MAX_RETRIES} tries"
        )

    if isinstance(kind, MomentCurve):
        points = []
        for t in range(1, m + 1):
            tf = Fraction(t)
            points.append(Point(tuple(tf**p for p in range(1, d + 1))))
        rng = make_rng(spec.seed)
        cps = _color_points(points, d, n, spec.coloring, rng)
        report = general_position_check(cps)
        if not report.ok:
            raise AssertionError(
                f"internal: moment-curve points cannot be degenerate, witness {report.witness}"
            )
        return cps

    raise OutOfRange(f"unknown generator kind: {kind!r}")


def _derived_seed(seed: int, attempt: int) -> int:
    # distinct, reproducible retry seeds
    return (seed * 1_000_003 + attempt) % 2**63
