"""Exact-arithmetic geometric primitives.

Everything here runs over arbitrary-precision rationals (fractions.Fraction),
so orientation signs and hull-membership decisions are exact. Decimal input
strings are parsed as exact fractions ("6.2" becomes 31/5); floats are
converted via their exact binary value only when explicitly requested.

Containment is closed-hull membership: boundary points count. Degenerate
simplices are rejected rather than symbolically perturbed; discrete
pipelines are expected to pass general_position_check or call perturb.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import (
    DegenerateSimplex,
    DimensionMismatch,
    NonpositiveMagnitude,
)
from .rng import make_rng, rational_uniform

RationalLike = Union[Fraction, int, str]


def as_fraction(value) -> Fraction:
    """Parse a coordinate into an exact Fraction.

    Accepts Fraction, int, and strings in decimal ("6.2") or ratio ("31/5")
    form. Floats are accepted and converted exactly from their binary value,
    which is what callers want when rationalizing Monte Carlo output.
    """
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class Point:
    """A point of R^d with exact rational coordinates."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(as_fraction(c) for c in self.coords))
        if not self.coords:
            raise DimensionMismatch("a point needs at least one coordinate")

    @classmethod
    def of(cls, *coords: RationalLike) -> "Point":
        return cls(tuple(coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def translate(self, offset: Sequence[Fraction]) -> "Point":
        return Point(tuple(c + o for c, o in zip(self.coords, offset)))

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coords)

    def __repr__(self):
        return "Point(%s)" % ", ".join(str(c) for c in self.coords)


@dataclass(frozen=True)
class Simplex:
    """d+1 points of R^d; the closed convex hull of its vertices."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise DimensionMismatch("empty simplex")
        d = self.vertices[0].dim
        if any(v.dim != d for v in self.vertices):
            raise DimensionMismatch("simplex vertices of mixed dimension")
        if len(self.vertices) != d + 1:
            raise DimensionMismatch(
                f"simplex in R^{d} needs {d + 1} vertices, got {len(self.vertices)}"
            )

    @property
    def dim(self) -> int:
        return self.vertices[0].dim

    def centroid(self) -> Point:
        d = self.dim
        k = len(self.vertices)
        return Point(tuple(sum(v[i] for v in self.vertices) / k for i in range(d)))


@dataclass(frozen=True)
class ColoredPointSet:
    """d+1 color classes of points in R^d: the discrete problem instance."""

    classes: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple(c) for c in self.classes))
        pts = [p for cls in self.classes for p in cls]
        if not pts:
            raise DimensionMismatch("colored point set has no points")
        d = pts[0].dim
        if any(p.dim != d for p in pts):
            raise DimensionMismatch("points of mixed dimension")
        if len(self.classes) != d + 1:
            raise DimensionMismatch(
                f"need exactly {d + 1} color classes in R^{d}, got {len(self.classes)}"
            )

    @classmethod
    def from_coords(cls, classes: Iterable[Iterable[Sequence[RationalLike]]]) -> "ColoredPointSet":
        return cls(tuple(tuple(Point(tuple(p)) for p in c) for c in classes))

    @property
    def dim(self) -> int:
        return self.classes[0][0].dim if self.classes[0] else self.all_points()[0].dim

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def total_tuples(self) -> int:
        t = 1
        for c in self.classes:
            t *= len(c)
        return t

    def all_points(self) -> list[Point]:
        return [p for cls in self.classes for p in cls]

    def is_balanced(self) -> bool:
        sizes = self.class_sizes
        return all(s == sizes[0] for s in sizes)


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    n = len(rows)
    m = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def orientation_det(pts: Sequence[Point]) -> Fraction:
    """Exact determinant of the d x d matrix of edge vectors pts[i] - pts[0]."""
    if not pts:
        raise DimensionMismatch("no points given")
    d = pts[0].dim
    if any(p.dim != d for p in pts):
        raise DimensionMismatch("points of mixed dimension")
    if len(pts) != d + 1:
        raise DimensionMismatch(f"orientation in R^{d} takes {d + 1} points, got {len(pts)}")
    o = pts[0]
    if d == 1:
        return pts[1][0] - o[0]
    if d == 2:
        ax, ay = pts[1][0] - o[0], pts[1][1] - o[1]
        bx, by = pts[2][0] - o[0], pts[2][1] - o[1]
        return ax * by - ay * bx
    if d == 3:
        a = [pts[1][i] - o[i] for i in range(3)]
        b = [pts[2][i] - o[i] for i in range(3)]
        c = [pts[3][i] - o[i] for i in range(3)]
        return (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        )
    rows = [[p[i] - o[i] for i in range(d)] for p in pts[1:]]
    return _det_fraction(rows)


def orientation(pts: Sequence[Point]) -> int:
    """Sign in {-1, 0, +1} of the orientation determinant of d+1 points."""
    det = orientation_det(pts)
    return (det > 0) - (det < 0)


def contains(s: Simplex, q: Point) -> bool:
    """Closed-hull membership of q in simplex s, by d+1 exact orientation tests.

    For each vertex i, replace it by q and compare the resulting orientation
    sign against the full simplex's sign: membership iff every test agrees
    or is zero (zero means q sits on that facet's hyperplane).
    """
    if q.dim != s.dim:
        raise DimensionMismatch(f"query of dim {q.dim} against simplex in R^{s.dim}")
    verts = list(s.vertices)
    full = orientation(verts)
    if full == 0:
        raise DegenerateSimplex("simplex vertices are affinely dependent")
    for i in range(len(verts)):
        saved = verts[i]
        verts[i] = q
        sign = orientation(verts)
        verts[i] = saved
        if sign != 0 and sign != full:
            return False
    return True


def separating_facet(s: Simplex, q: Point) -> Optional[int]:
    """Index of a vertex whose opposite facet strictly separates q, or None.

    Witness extraction for contains(s, q) == False: the returned index i
    names the facet (all vertices except i) whose orientation test fails
    strictly.
    """
    verts = list(s.vertices)
    full = orientation(verts)
    if full == 0:
        raise DegenerateSimplex("simplex vertices are affinely dependent")
    for i in range(len(verts)):
        saved = verts[i]
        verts[i] = q
        sign = orientation(verts)
        verts[i] = saved
        if sign != 0 and sign != full:
            return i
    return None


@dataclass(frozen=True)
class GeneralPositionReport:
    ok: bool
    witness: Optional[tuple[int, ...]] = None


def affine_dependency_witness(pts: Sequence[Point]) -> Optional[tuple[int, ...]]:
    """First d+1-subset of pts that is affinely dependent, or None.

    Exhaustive over all subsets; exact arithmetic. Meant for desk-scale
    inputs where a certificate matters more than speed.
    """
    if not pts:
        return None
    d = pts[0].dim
    if len(pts) <= d:
        return None
    for combo in itertools.combinations(range(len(pts)), d + 1):
        if orientation([pts[i] for i in combo]) == 0:
            return combo
    return None


def general_position_check(
    cps: ColoredPointSet, q: Optional[Point] = None
) -> GeneralPositionReport:
    """Exhaustively test that no d+1 points of the union (plus q) are affinely dependent.

    Indices in the witness refer to the flattened class order, with q (when
    given) as the final index.
    """
    pts = cps.all_points()
    if q is not None:
        if q.dim != cps.dim:
            raise DimensionMismatch("query dimension differs from point set")
        pts = pts + [q]
    witness = affine_dependency_witness(pts)
    if witness is not None:
        return GeneralPositionReport(ok=False, witness=witness)
    return GeneralPositionReport(ok=True)


def perturb(cps: ColoredPointSet, seed: int, magnitude) -> ColoredPointSet:
    """Deterministic rational perturbation of every coordinate.

    Each coordinate receives an independent pseudo-random offset, uniform on
    a fixed grid of [-magnitude, +magnitude]. Same seed, same output.
    """
    magnitude = as_fraction(magnitude)
    if magnitude <= 0:
        raise NonpositiveMagnitude(f"magnitude must be > 0, got {magnitude}")
    rng = make_rng(seed)
    new_classes = []
    for cls in cps.classes:
        new_classes.append(
            tuple(
                Point(tuple(c + rational_uniform(rng, magnitude) for c in p.coords))
                for p in cls
            )
        )
    return ColoredPointSet(tuple(new_classes))
