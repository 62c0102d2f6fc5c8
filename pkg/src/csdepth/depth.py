"""Colorful simplicial depth: exact counting and deep-point search.

The depth of a query point q in a colored point set P_0, ..., P_d is the
number of tuples (v_0, ..., v_d) in P_0 x ... x P_d whose closed convex hull
contains q. Two exact algorithms are provided: plain enumeration in any
dimension, and an O(n log n) angular sweep in the plane that must agree with
enumeration on every general-position instance (and is tested to).

Deep-point search comes in an exact planar flavor (see the arrangement
module) and sampling heuristics for higher dimensions. The selection-bound
verifier compares the best depth found against the lower bound
2d/((d+1)(d+1)!) * prod(n_i), which an exact search can never fall below.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DimensionNotTwo,
    EmptyClass,
    GeneralPositionViolation,
    NonpositiveBudget,
    TheoremViolation,
)
from .geometry import (
    ColoredPointSet,
    Point,
    Simplex,
    affine_dependency_witness,
    contains,
    orientation,
)
from .rng import make_rng


class DepthMethod(str, Enum):
    BRUTE_FORCE = "BruteForce"
    SWEEP_2D = "Sweep2D"


class SearchMethod(str, Enum):
    ARRANGEMENT_2D = "Arrangement2D"
    CENTROID_HEURISTIC = "CentroidHeuristic"
    LOCAL_SEARCH = "LocalSearch"


class VerifyMode(str, Enum):
    EXACT_2D = "Exact2D"
    HEURISTIC = "Heuristic"


@dataclass(frozen=True)
class DepthResult:
    """Depth count at a query point: count containing tuples out of total."""

    query: Point
    count: int
    total: int
    method: DepthMethod

    def __post_init__(self):
        if not (0 <= self.count <= self.total):
            raise ValueError(f"count {self.count} outside [0, {self.total}]")
        if self.total <= 0:
            raise ValueError("total must be positive")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.total)

    def to_json(self) -> dict:
        from .dataio import format_rational

        return {
            "query": [format_rational(c) for c in self.query.coords],
            "count": self.count,
            "total": self.total,
            "fraction": format_rational(self.fraction),
            "method": self.method.value,
        }


@dataclass(frozen=True)
class MaxDepthResult:
    """Best point found by a depth search, with the depth certified at it."""

    point: Point
    depth: DepthResult
    candidates_evaluated: int
    method: SearchMethod

    def __post_init__(self):
        if self.depth.query != self.point:
            raise ValueError("depth.query must equal point")

    def to_json(self) -> dict:
        return {
            "point": self.depth.to_json()["query"],
            "depth": self.depth.to_json(),
            "candidates_evaluated": self.candidates_evaluated,
            "method": self.method.value,
        }


@dataclass(frozen=True)
class SelectionBoundReport:
    max_found: int
    bound_value: Fraction
    satisfied: bool
    mode: VerifyMode
    result: MaxDepthResult

    def to_json(self) -> dict:
        from .dataio import format_rational

        return {
            "max_found": self.max_found,
            "bound_value": format_rational(self.bound_value),
            "satisfied": self.satisfied,
            "mode": self.mode.value,
            "result": self.result.to_json(),
        }


def _require_nonempty_classes(cps: ColoredPointSet) -> None:
    if any(len(c) == 0 for c in cps.classes):
        raise EmptyClass("every color class needs at least one point")


def _require_general_position(pts: Sequence[Point], what: str) -> None:
    witness = affine_dependency_witness(list(pts))
    if witness is not None:
        raise GeneralPositionViolation(
            f"{what}: points {witness} are affinely dependent", witness=witness
        )


def colorful_depth_bruteforce(cps: ColoredPointSet, q: Point) -> DepthResult:
    """Depth by enumerating every colorful tuple and testing closed containment."""
    _require_nonempty_classes(cps)
    _require_general_position(cps.all_points() + [q], "instance with query")
    count = 0
    for combo in itertools.product(*cps.classes):
        if contains(Simplex(combo), q):
            count += 1
    return DepthResult(query=q, count=count, total=cps.total_tuples, method=DepthMethod.BRUTE_FORCE)


def monochromatic_depth_bruteforce(points: Sequence[Point], q: Point) -> DepthResult:
    """Depth over all C(n, d+1) vertex subsets of a single uncolored point set."""
    points = list(points)
    if not points:
        raise EmptyClass("need at least one point")
    d = points[0].dim
    total = math.comb(len(points), d + 1)
    if total == 0:
        raise EmptyClass(f"need at least {d + 1} points in R^{d}")
    _require_general_position(points + [q], "points with query")
    count = 0
    for combo in itertools.combinations(points, d + 1):
        if contains(Simplex(combo), q):
            count += 1
    return DepthResult(query=q, count=count, total=total, method=DepthMethod.BRUTE_FORCE)


# Pairs of "other" colors for the planar sweep, indexed by a point's own color.
_OTHERS = ((1, 2), (0, 2), (0, 1))


def _angle_key(dx: Fraction, dy: Fraction):
    """Exact sort key for the direction (dx, dy), increasing with angle in [0, 2pi).

    Within each half-turn the slope -dx/dy increases strictly with the angle,
    with the half-turn's starting axis direction ordered first.
    """
    if dy > 0 or (dy == 0 and dx > 0):
        half = 0
    else:
        half = 1
    if dy == 0:
        return (half, 0, Fraction(0))
    return (half, 1, Fraction(-dx, dy))


def colorful_depth_sweep2d(cps: ColoredPointSet, q: Point) -> DepthResult:
    """Planar depth by angular sweep: count = n0*n1*n2 - (tuples avoiding q).

    A colorful tuple avoids q exactly when its three directions from q fit in
    an open half-turn; each avoiding tuple is charged to its angularly first
    member, whose forward open half-turn contains the other two. The sweep
    sorts directions once and maintains the half-turn window with a rotating
    two-pointer; all comparisons are exact rational cross products.
    """
    if cps.dim != 2:
        raise DimensionNotTwo(f"sweep requires d=2, got d={cps.dim}")
    _require_nonempty_classes(cps)
    _require_general_position(cps.all_points() + [q], "instance with query")

    dirs: list[tuple[Fraction, Fraction, int]] = []
    qx, qy = q[0], q[1]
    for color, cls in enumerate(cps.classes):
        for p in cls:
            dirs.append((p[0] - qx, p[1] - qy, color))
    n0, n1, n2 = cps.class_sizes
    total = n0 * n1 * n2
    n = len(dirs)

    order = sorted(range(n), key=lambda i: _angle_key(dirs[i][0], dirs[i][1]))
    seq = [dirs[i] for i in order]

    avoiding = 0
    cnt = [0, 0, 0]
    j = 1
    for i in range(n):
        px, py, pc = seq[i]
        while j < i + n:
            x, y, c = seq[j % n]
            if px * y - py * x > 0:
                cnt[c] += 1
                j += 1
            else:
                break
        o1, o2 = _OTHERS[pc]
        avoiding += cnt[o1] * cnt[o2]
        if i + 1 < n:
            if j > i + 1:
                cnt[seq[i + 1][2]] -= 1
            else:
                j = i + 2

    return DepthResult(
        query=q, count=total - avoiding, total=total, method=DepthMethod.SWEEP_2D
    )


def depth_at(cps: ColoredPointSet, q: Point) -> DepthResult:
    """Depth by the fastest applicable exact method."""
    if cps.dim == 2:
        return colorful_depth_sweep2d(cps, q)
    return colorful_depth_bruteforce(cps, q)


def _query_dependency(cps: ColoredPointSet, q: Point) -> bool:
    """True if q together with some d input points is affinely dependent.

    Cheaper than a full general-position check when the instance itself has
    already been validated.
    """
    pts = cps.all_points()
    d = cps.dim
    for combo in itertools.combinations(pts, d):
        if orientation(list(combo) + [q]) == 0:
            return True
    return False


def _depth_count_checked(cps: ColoredPointSet, q: Point) -> Optional[int]:
    """Depth count at q, or None when q is degenerate against the instance.

    Assumes the instance itself is in general position. Degenerate probes are
    skipped by searches rather than evaluated, so heuristics only ever report
    depths of cells, never inflated boundary counts.
    """
    if _query_dependency(cps, q):
        return None
    if cps.dim == 2:
        return _sweep_count_unchecked(cps, q)
    count = 0
    for combo in itertools.product(*cps.classes):
        if contains(Simplex(combo), q):
            count += 1
    return count


def _sweep_count_unchecked(cps: ColoredPointSet, q: Point) -> int:
    """Sweep count without the general-position recheck (caller guarantees it)."""
    dirs: list[tuple[Fraction, Fraction, int]] = []
    qx, qy = q[0], q[1]
    for color, cls in enumerate(cps.classes):
        for p in cls:
            dirs.append((p[0] - qx, p[1] - qy, color))
    n0, n1, n2 = cps.class_sizes
    total = n0 * n1 * n2
    n = len(dirs)
    seq = sorted(dirs, key=lambda t: _angle_key(t[0], t[1]))
    avoiding = 0
    cnt = [0, 0, 0]
    j = 1
    for i in range(n):
        px, py, pc = seq[i]
        while j < i + n:
            x, y, c = seq[j % n]
            if px * y - py * x > 0:
                cnt[c] += 1
                j += 1
            else:
                break
        o1, o2 = _OTHERS[pc]
        avoiding += cnt[o1] * cnt[o2]
        if i + 1 < n:
            if j > i + 1:
                cnt[seq[i + 1][2]] -= 1
            else:
                j = i + 2
    return total - avoiding


def _bounding_box(cps: ColoredPointSet) -> tuple[list[Fraction], list[Fraction]]:
    pts = cps.all_points()
    d = cps.dim
    lo = [min(p[i] for p in pts) for i in range(d)]
    hi = [max(p[i] for p in pts) for i in range(d)]
    return lo, hi


def max_depth_heuristic(
    cps: ColoredPointSet,
    strategy: SearchMethod = SearchMethod.CENTROID_HEURISTIC,
    budget: int = 100,
    seed: int = 0,
) -> MaxDepthResult:
    """Lower-bound search for a deep point: random tuple centroids, optionally
    refined by coordinate descent with halving steps.

    Candidates that land degenerately (on a hyperplane through d input
    points) are skipped. The result is a lower bound on the true maximum;
    the method field records the non-exactness.
    """
    if strategy not in (SearchMethod.CENTROID_HEURISTIC, SearchMethod.LOCAL_SEARCH):
        raise ValueError(f"not a heuristic strategy: {strategy}")
    if budget <= 0:
        raise NonpositiveBudget(f"budget must be > 0, got {budget}")
    _require_nonempty_classes(cps)
    _require_general_position(cps.all_points(), "instance")

    rng = make_rng(seed)
    d = cps.dim
    sizes = cps.class_sizes

    best_point: Optional[Point] = None
    best_count = -1
    evaluated = 0

    def consider(p: Point) -> Optional[int]:
        nonlocal best_point, best_count, evaluated
        c = _depth_count_checked(cps, p)
        if c is None:
            return None
        evaluated += 1
        if c > best_count or (c == best_count and best_point is not None and p.coords < best_point.coords):
            best_count = c
            best_point = p
        return c

    for _ in range(budget):
        combo = [cps.classes[k][int(rng.integers(0, sizes[k]))] for k in range(d + 1)]
        consider(Simplex(tuple(combo)).centroid())

    if best_point is None:
        # every sampled centroid was degenerate; fall back to the first tuple,
        # nudged by its own centroid weights
        combo = tuple(cls[0] for cls in cps.classes)
        consider(Simplex(combo).centroid())
    if best_point is None:
        raise GeneralPositionViolation("no usable probe found (all candidates degenerate)")

    if strategy == SearchMethod.LOCAL_SEARCH:
        lo, hi = _bounding_box(cps)
        extent = max((h - l for l, h in zip(lo, hi)), default=Fraction(1))
        if extent <= 0:
            extent = Fraction(1)
        step = extent / 8
        floor = extent / 2**16
        while step > floor:
            improved = False
            for axis in range(d):
                for sgn in (1, -1):
                    cand = Point(
                        tuple(
                            c + sgn * step if i == axis else c
                            for i, c in enumerate(best_point.coords)
                        )
                    )
                    c = _depth_count_checked(cps, cand)
                    if c is None:
                        continue
                    evaluated += 1
                    if c > best_count:
                        best_count, best_point = c, cand
                        improved = True
            if not improved:
                step /= 2

    depth = DepthResult(
        query=best_point,
        count=best_count,
        total=cps.total_tuples,
        method=DepthMethod.SWEEP_2D if d == 2 else DepthMethod.BRUTE_FORCE,
    )
    return MaxDepthResult(
        point=best_point, depth=depth, candidates_evaluated=evaluated, method=strategy
    )


def selection_bound_value(d: int, total_tuples: int) -> Fraction:
    """The first-selection lower bound 2d/((d+1)(d+1)!) scaled by the tuple count."""
    return Fraction(2 * d, (d + 1) * math.factorial(d + 1)) * total_tuples


def verify_selection_bound(
    cps: ColoredPointSet,
    mode: VerifyMode = VerifyMode.EXACT_2D,
    strategy: SearchMethod = SearchMethod.CENTROID_HEURISTIC,
    budget: int = 200,
    seed: int = 0,
) -> SelectionBoundReport:
    """Check max depth against the bound 2d/((d+1)(d+1)!) * prod(n_i).

    For unbalanced classes the bound uses the actual tuple count in place of
    n^(d+1). In exact mode a failure is a theorem violation (a bug in this
    package, not in mathematics) and raises; in heuristic mode an unsatisfied
    report only means the search did not find a deep enough point.
    """
    from .arrangement import max_depth_exact2d

    if mode == VerifyMode.EXACT_2D:
        result = max_depth_exact2d(cps)
    else:
        result = max_depth_heuristic(cps, strategy=strategy, budget=budget, seed=seed)
    bound = selection_bound_value(cps.dim, cps.total_tuples)
    satisfied = result.depth.count >= bound
    report = SelectionBoundReport(
        max_found=result.depth.count,
        bound_value=bound,
        satisfied=satisfied,
        mode=mode,
        result=result,
    )
    if mode == VerifyMode.EXACT_2D and not satisfied:
        raise TheoremViolation(
            f"exact max depth {result.depth.count} fell below proven bound {bound}",
            report=report,
        )
    return report
