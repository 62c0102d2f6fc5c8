"""Continuous-measure subsystem: samplers, containment estimation, deep points.

A measure family is d+1 absolutely continuous probability measures on R^d.
A random simplex drawn from the family takes one independent vertex per
measure; containment_probability estimates, by Monte Carlo, the probability
that a fixed point lies in the closed hull of such a simplex.

The mollifier bridges the discrete and continuous worlds: each color class
of a point set becomes a measure by centering a smooth bump of width 1/n at
every point, the bump being the product of one-dimensional densities
proportional to psi(x) = exp(-1/(1-x^2)) on (-1, 1). Samples are drawn by
picking a class point uniformly and adding per-coordinate psi noise scaled
by 1/n, using rejection against the proposal-uniform with acceptance
psi(u)/psi(0) = exp(1 - 1/(1-u^2)).

Monte Carlo runs in floating point; near-degenerate samples are vanishingly
rare and any misclassification is absorbed by the reported confidence
interval. The mollification convergence check is the exception: it picks the
bump width from an exact separation certificate so that no sampled tuple can
change its containment status relative to its source tuple at all.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import isqrt
from typing import Sequence, Union

import numpy as np

from .depth import colorful_depth_bruteforce
from .errors import EmptyClass, InvalidMeasure, OutOfRange
from .geometry import ColoredPointSet, Point, orientation_det
from .rng import make_rng

_BLOCK = 1 << 16


# --- measure specifications -------------------------------------------------


@dataclass(frozen=True)
class UniformBox:
    """Uniform on the axis-aligned box [lo_i, hi_i] per axis."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise InvalidMeasure("box bounds must be nonempty and of equal length")
        if any(l >= h for l, h in zip(self.lo, self.hi)):
            raise InvalidMeasure(f"box needs lo < hi per axis, got {self.lo} vs {self.hi}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def sample_batch(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, (count, self.dim))

    def support_box(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.lo), np.array(self.hi)

    def to_json(self) -> dict:
        return {"kind": "uniform_box", "lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class UniformBall:
    """Uniform on the closed Euclidean ball."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.center:
            raise InvalidMeasure("ball center must be nonempty")
        if not self.radius > 0:
            raise InvalidMeasure(f"ball radius must be > 0, got {self.radius}")

    @property
    def dim(self) -> int:
        return len(self.center)

    def sample_batch(self, rng: np.random.Generator, count: int) -> np.ndarray:
        d = self.dim
        x = rng.standard_normal((count, d))
        norms = np.linalg.norm(x, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        r = self.radius * rng.uniform(0.0, 1.0, (count, 1)) ** (1.0 / d)
        return np.asarray(self.center) + x / norms * r

    def support_box(self) -> tuple[np.ndarray, np.ndarray]:
        c = np.asarray(self.center)
        return c - self.radius, c + self.radius

    def to_json(self) -> dict:
        return {"kind": "uniform_ball", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Gaussian:
    """Axis-aligned normal with the given mean and per-axis deviations."""

    mean: tuple[float, ...]
    sigmas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "mean", tuple(float(v) for v in self.mean))
        object.__setattr__(self, "sigmas", tuple(float(v) for v in self.sigmas))
        if len(self.mean) != len(self.sigmas) or not self.mean:
            raise InvalidMeasure("mean and sigmas must be nonempty and of equal length")
        if any(not s > 0 for s in self.sigmas):
            raise InvalidMeasure(f"deviations must be > 0, got {self.sigmas}")

    @classmethod
    def standard(cls, dim: int) -> "Gaussian":
        return cls(mean=(0.0,) * dim, sigmas=(1.0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.mean)

    def sample_batch(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return np.asarray(self.mean) + rng.standard_normal((count, self.dim)) * np.asarray(
            self.sigmas
        )

    def support_box(self) -> tuple[np.ndarray, np.ndarray]:
        # covers > 0.9999 of the mass per axis; used only to seed searches
        m = np.asarray(self.mean)
        s = np.asarray(self.sigmas)
        return m - 4 * s, m + 4 * s

    def to_json(self) -> dict:
        return {"kind": "gaussian", "mean": list(self.mean), "sigmas": list(self.sigmas)}


@dataclass(frozen=True)
class MollifiedEmpirical:
    """Equal-weight mixture of width-1/n bumps centered at a point list.

    Each sample picks a center uniformly from the list and adds a noise
    vector with i.i.d. per-coordinate psi draws scaled by 1/width_inverse,
    so the support is the union of open cubes center + (-1/n, 1/n)^d.
    """

    points: tuple[Point, ...]
    width_inverse: int

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise InvalidMeasure("mollified measure needs a nonempty point list")
        d = self.points[0].dim
        if any(p.dim != d for p in self.points):
            raise InvalidMeasure("mollified points of mixed dimension")
        if self.width_inverse < 1:
            raise InvalidMeasure(f"width_inverse must be >= 1, got {self.width_inverse}")

    @property
    def dim(self) -> int:
        return self.points[0].dim

    @cached_property
    def _centers(self) -> np.ndarray:
        return np.array([p.as_floats() for p in self.points])

    def sample_batch(self, rng: np.random.Generator, count: int) -> np.ndarray:
        d = self.dim
        idx = rng.integers(0, len(self.points), count)
        noise = _psi_draws(rng, count * d).reshape(count, d) / self.width_inverse
        return self._centers[idx] + noise

    def support_box(self) -> tuple[np.ndarray, np.ndarray]:
        w = 1.0 / self.width_inverse
        return self._centers.min(axis=0) - w, self._centers.max(axis=0) + w

    def to_json(self) -> dict:
        from .dataio import format_rational

        return {
            "kind": "mollified_empirical",
            "points": [[format_rational(c) for c in p.coords] for p in self.points],
            "width_inverse": self.width_inverse,
        }


MeasureSpec = Union[UniformBox, UniformBall, Gaussian, MollifiedEmpirical]


@dataclass(frozen=True)
class MeasureFamily:
    """Exactly d+1 measures on R^d, one per vertex of the random simplex."""

    measures: tuple[MeasureSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "measures", tuple(self.measures))
        if not self.measures:
            raise InvalidMeasure("empty measure family")
        d = self.measures[0].dim
        if any(m.dim != d for m in self.measures):
            raise InvalidMeasure("measures of mixed dimension")
        if len(self.measures) != d + 1:
            raise InvalidMeasure(
                f"family on R^{d} needs {d + 1} measures, got {len(self.measures)}"
            )

    @property
    def dim(self) -> int:
        return self.measures[0].dim

    def support_box(self) -> tuple[np.ndarray, np.ndarray]:
        boxes = [m.support_box() for m in self.measures]
        lo = np.min([b[0] for b in boxes], axis=0)
        hi = np.max([b[1] for b in boxes], axis=0)
        return lo, hi

    def to_json(self) -> dict:
        return {"dim": self.dim, "measures": [m.to_json() for m in self.measures]}


def family_from_json(doc: dict) -> MeasureFamily:
    try:
        specs = []
        for m in doc["measures"]:
            kind = m["kind"]
            if kind == "uniform_box":
                specs.append(UniformBox(lo=tuple(m["lo"]), hi=tuple(m["hi"])))
            elif kind == "uniform_ball":
                specs.append(UniformBall(center=tuple(m["center"]), radius=m["radius"]))
            elif kind == "gaussian":
                specs.append(Gaussian(mean=tuple(m["mean"]), sigmas=tuple(m["sigmas"])))
            elif kind == "mollified_empirical":
                from .dataio import parse_rational

                pts = tuple(
                    Point(tuple(parse_rational(c) for c in coords)) for coords in m["points"]
                )
                specs.append(MollifiedEmpirical(points=pts, width_inverse=int(m["width_inverse"])))
            else:
                raise InvalidMeasure(f"unknown measure kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise InvalidMeasure(f"malformed measure family: {exc}") from exc
    return MeasureFamily(tuple(specs))


# --- psi sampling machinery ---------------------------------------------------


def _psi_accept_probs(u: np.ndarray) -> np.ndarray:
    """Acceptance probability psi(u)/psi(0) = exp(1 - 1/(1-u^2)), zero outside (-1,1)."""
    inner = 1.0 - u * u
    safe = np.maximum(inner, 1e-300)
    return np.where(inner > 0.0, np.exp(1.0 - 1.0 / safe), 0.0)


def _psi_draws(rng: np.random.Generator, count: int) -> np.ndarray:
    """count i.i.d. draws from the normalized psi density on (-1, 1) by rejection."""
    out = np.empty(count)
    filled = 0
    while filled < count:
        need = count - filled
        m = max(64, int(need * 1.8) + 16)
        u = rng.uniform(-1.0, 1.0, m)
        accepted = u[rng.uniform(0.0, 1.0, m) < _psi_accept_probs(u)]
        take = accepted[: need]
        out[filled : filled + take.size] = take
        filled += take.size
    return out


@lru_cache(maxsize=1)
def psi_integral() -> float:
    """Quadrature value of the unnormalized integral of psi over (-1, 1)."""
    from scipy.integrate import quad

    val, _ = quad(
        lambda x: math.exp(-1.0 / (1.0 - x * x)) if abs(x) < 1.0 else 0.0,
        -1.0,
        1.0,
        limit=200,
    )
    return val


def psi_expected_acceptance() -> float:
    """Theoretical acceptance rate of the rejection sampler: integral / (2 psi(0))."""
    return psi_integral() / (2.0 * math.exp(-1.0))


def psi_acceptance_rate(seed: int, proposals: int) -> float:
    """Empirical acceptance fraction over a fixed number of proposals."""
    rng = make_rng(seed)
    u = rng.uniform(-1.0, 1.0, proposals)
    acc = rng.uniform(0.0, 1.0, proposals) < _psi_accept_probs(u)
    return float(np.count_nonzero(acc)) / proposals


def sample(m: MeasureSpec, rng: np.random.Generator) -> tuple[float, ...]:
    """One point distributed per the measure spec."""
    return tuple(float(v) for v in m.sample_batch(rng, 1)[0])


def mollify(cps: ColoredPointSet, n: int) -> MeasureFamily:
    """Replace each color class by its width-1/n bump mixture.

    Each class measure is normalized by the actual class size (not a common
    n), so every component is a probability measure even for unbalanced
    classes.
    """
    if any(len(c) == 0 for c in cps.classes):
        raise EmptyClass("cannot mollify an empty color class")
    if n < 1:
        raise InvalidMeasure(f"width scale must be >= 1, got {n}")
    return MeasureFamily(
        tuple(MollifiedEmpirical(points=cls, width_inverse=n) for cls in cps.classes)
    )


# --- containment estimation ---------------------------------------------------


def _batch_det(rows: np.ndarray) -> np.ndarray:
    d = rows.shape[1]
    if d == 1:
        return rows[:, 0, 0]
    if d == 2:
        return rows[:, 0, 0] * rows[:, 1, 1] - rows[:, 0, 1] * rows[:, 1, 0]
    if d == 3:
        a, b, c = rows[:, 0], rows[:, 1], rows[:, 2]
        return (
            a[:, 0] * (b[:, 1] * c[:, 2] - b[:, 2] * c[:, 1])
            - a[:, 1] * (b[:, 0] * c[:, 2] - b[:, 2] * c[:, 0])
            + a[:, 2] * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
        )
    return np.linalg.det(rows)


def _contained_mask(samples: list[np.ndarray], q: np.ndarray) -> np.ndarray:
    """Closed-hull membership of q per sampled tuple; degenerate tuples are False."""
    rows = np.stack([s - samples[0] for s in samples[1:]], axis=1)
    full = _batch_det(rows)
    ok = full != 0
    qb = np.broadcast_to(q, samples[0].shape)
    for i in range(len(samples)):
        repl = list(samples)
        repl[i] = qb
        rows_i = np.stack([s - repl[0] for s in repl[1:]], axis=1)
        ok &= _batch_det(rows_i) * full >= 0
    return ok


@dataclass(frozen=True)
class EstimateResult:
    """Monte Carlo containment probability at a query point."""

    query: tuple[float, ...]
    p_hat: float
    std_error: float
    samples: int
    seed: int

    def to_json(self) -> dict:
        return {
            "query": list(self.query),
            "p_hat": self.p_hat,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }


def _as_float_query(v, dim: int) -> tuple[float, ...]:
    if isinstance(v, Point):
        v = v.as_floats()
    v = tuple(float(x) for x in v)
    if len(v) != dim:
        raise InvalidMeasure(f"query of dim {len(v)} against family on R^{dim}")
    return v


def _estimate_hits(fam: MeasureFamily, q: Sequence[float], n_trials: int, rng) -> int:
    qa = np.asarray(q, dtype=float)
    hits = 0
    done = 0
    while done < n_trials:
        b = min(_BLOCK, n_trials - done)
        samples = [m.sample_batch(rng, b) for m in fam.measures]
        hits += int(np.count_nonzero(_contained_mask(samples, qa)))
        done += b
    return hits


def containment_probability(
    fam: MeasureFamily, v, n_trials: int, seed: int
) -> EstimateResult:
    """Estimate the probability that v lies in a random simplex of the family.

    Deterministic given (family, v, n_trials, seed): trials are consumed in
    fixed blocks from a single PCG64 stream.
    """
    if n_trials < 1:
        raise OutOfRange(f"need at least one trial, got {n_trials}")
    q = _as_float_query(v, fam.dim)
    hits = _estimate_hits(fam, q, n_trials, make_rng(seed))
    p_hat = hits / n_trials
    std = math.sqrt(p_hat * (1.0 - p_hat) / n_trials)
    return EstimateResult(query=q, p_hat=p_hat, std_error=std, samples=n_trials, seed=seed)


def deep_point_search(
    fam: MeasureFamily,
    grid_resolution: int,
    refine_rounds: int,
    n_per_eval: int,
    seed: int,
) -> EstimateResult:
    """Grid-then-refine search for a point with high containment probability.

    Evaluates the estimator on a grid over the combined support box, recenters
    a half-size window on the best cell refine_rounds times, and reports the
    winner with a fresh-seed estimate so the reported p_hat is not selection
    biased.
    """
    if grid_resolution < 1:
        raise OutOfRange(f"grid_resolution must be >= 1, got {grid_resolution}")
    if refine_rounds < 0:
        raise OutOfRange(f"refine_rounds must be >= 0, got {refine_rounds}")
    if n_per_eval < 1:
        raise OutOfRange(f"n_per_eval must be >= 1, got {n_per_eval}")

    d = fam.dim
    lo, hi = fam.support_box()
    lo = lo.astype(float)
    hi = hi.astype(float)
    ss = np.random.SeedSequence(seed)

    best_point = None
    for _ in range(refine_rounds + 1):
        axes = [
            lo[i] + (np.arange(grid_resolution) + 0.5) * (hi[i] - lo[i]) / grid_resolution
            for i in range(d)
        ]
        best_hits = -1
        for idx in itertools.product(range(grid_resolution), repeat=d):
            pt = tuple(axes[i][idx[i]] for i in range(d))
            rng = np.random.Generator(np.random.PCG64(ss.spawn(1)[0]))
            hits = _estimate_hits(fam, pt, n_per_eval, rng)
            if hits > best_hits:
                best_hits = hits
                best_point = pt
        half = (hi - lo) / 4.0
        center = np.asarray(best_point)
        lo, hi = center - half, center + half

    rng = np.random.Generator(np.random.PCG64(ss.spawn(1)[0]))
    hits = _estimate_hits(fam, best_point, n_per_eval, rng)
    p_hat = hits / n_per_eval
    std = math.sqrt(p_hat * (1.0 - p_hat) / n_per_eval)
    return EstimateResult(
        query=tuple(float(x) for x in best_point),
        p_hat=p_hat,
        std_error=std,
        samples=n_per_eval,
        seed=seed,
    )


# --- mollification convergence ------------------------------------------------


def _min_sq_hyperplane_distance(points: list[Point], q: Point) -> Fraction:
    """Exact min squared distance from q to affine hulls of d-subsets of points."""
    d = q.dim
    best = None
    for combo in itertools.combinations(points, d):
        base = combo[0]
        edges = [[p[i] - base[i] for i in range(d)] for p in combo[1:]]
        # squared (d-1)-volume of the base cell, as a Gram determinant
        if edges:
            gram_rows = [
                [sum(ei * ej for ei, ej in zip(e1, e2)) for e2 in edges] for e1 in edges
            ]
            gram = _det_rational(gram_rows)
        else:
            gram = Fraction(1)
        if gram == 0:
            continue  # degenerate subset spans no hyperplane
        vol = orientation_det(list(combo) + [q])
        d2 = Fraction(vol * vol) / gram
        if best is None or d2 < best:
            best = d2
    if best is None or best == 0:
        raise OutOfRange("query lies on a hyperplane through input points")
    return best


def _det_rational(rows) -> Fraction:
    from .geometry import _det_fraction

    return _det_fraction([[Fraction(v) for v in row] for row in rows])


def _no_flip_certificate(cps: ColoredPointSet, q: Point, n: int) -> bool:
    """True when moving each input point within its closed 1/n cube cannot
    change the sign of any facet orientation against q.

    A facet of a colorful simplex is a d-subset with pairwise distinct
    colors, so only those subsets matter. Orientation is multilinear in the
    vertex positions, so its extremes over a product of cubes occur at
    corner assignments; checking all corners is a complete certificate.
    Stability of every facet sign pins every tuple's containment status: if
    all facet signs agree, the full simplex determinant is their sum and
    cannot vanish or flip; if they disagree, the query stays outside.
    """
    d = cps.dim
    w = Fraction(1, n)
    corner_offsets = list(itertools.product((-w, w), repeat=d))
    for class_combo in itertools.combinations(cps.classes, d):
        for combo in itertools.product(*class_combo):
            base_sign = None
            for corners in itertools.product(corner_offsets, repeat=d):
                moved = [
                    Point(tuple(c + o for c, o in zip(p.coords, off)))
                    for p, off in zip(combo, corners)
                ]
                det = orientation_det(list(moved) + [q])
                s = (det > 0) - (det < 0)
                if s == 0:
                    return False
                if base_sign is None:
                    base_sign = s
                elif s != base_sign:
                    return False
    return True


@dataclass(frozen=True)
class MollificationReport:
    exact_fraction: Fraction
    estimate: EstimateResult
    n_used: int
    agrees: bool

    def to_json(self) -> dict:
        from .dataio import format_rational

        return {
            "exact_fraction": format_rational(self.exact_fraction),
            "estimate": self.estimate.to_json(),
            "n_used": self.n_used,
            "agrees": self.agrees,
        }


def mollification_convergence_check(
    cps: ColoredPointSet, q: Point, n_trials: int, seed: int
) -> MollificationReport:
    """Compare exact discrete depth with the mollified containment estimate.

    The bump width is chosen from the exact separation margin delta* (the
    distance from q to the nearest hyperplane through d input points): the
    spec scale is the smallest n with 1/n < delta*/2, then doubled as needed
    until the corner certificate proves that no containment status can flip.
    With that width the mollified probability equals the exact depth fraction
    and the Monte Carlo estimate must agree within sampling error.
    """
    exact = colorful_depth_bruteforce(cps, q)  # validates general position

    delta2 = _min_sq_hyperplane_distance(cps.all_points(), q)
    # smallest n with 1/n < delta*/2, i.e. n^2 * delta*^2 > 4
    n_used = max(1, isqrt(int(4 / delta2)))
    while n_used * n_used * delta2 <= 4:
        n_used += 1
    while not _no_flip_certificate(cps, q, n_used):
        n_used *= 2
        if n_used > 2**62:
            raise AssertionError("internal: runaway mollification scale")

    fam = mollify(cps, n_used)
    est = containment_probability(fam, q, n_trials, seed)
    agrees = abs(est.p_hat - float(exact.fraction)) <= 4.0 * est.std_error
    return MollificationReport(
        exact_fraction=exact.fraction, estimate=est, n_used=n_used, agrees=agrees
    )
