from fractions import Fraction

import pytest

from csdepth.constructions import GeneratorSpec, UniformRandom, generate
from csdepth.geometry import ColoredPointSet, Point
from csdepth.rng import make_rng

# Three classes of three points with a known depth-10 query at (31/5, 31/5);
# also used as the golden regression instance throughout.
NINE_POINT_CLASSES = (
    (("9.9", "0.8"), ("9.0", "7.8"), ("12.6", "3.2")),
    (("8.1", "5.2"), ("2.1", "5.5"), ("0.1", "7.7")),
    (("6.7", "7.0"), ("14.2", "8.3"), ("6.6", "2.4")),
)
NINE_POINT_QUERY = ("6.2", "6.2")
NINE_POINT_DEPTH = 10  # frozen from exact brute force over all 27 tuples
NINE_POINT_MAX_DEPTH = 10  # frozen from the exact arrangement search


@pytest.fixture(scope="session")
def nine_points() -> ColoredPointSet:
    return ColoredPointSet.from_coords(NINE_POINT_CLASSES)


@pytest.fixture(scope="session")
def nine_points_query() -> Point:
    return Point.of(*NINE_POINT_QUERY)


def random_instance(seed: int, n_per_color: int = 3, dim: int = 2) -> ColoredPointSet:
    return generate(
        GeneratorSpec(kind=UniformRandom(), n_per_color=n_per_color, dim=dim, seed=seed)
    )


def random_rational_point(seed: int, dim: int = 2, lo: int = -2, hi: int = 3) -> Point:
    rng = make_rng(seed)
    span = hi - lo
    return Point(
        tuple(Fraction(lo) + Fraction(int(rng.integers(0, 9973)), 9973) * span for _ in range(dim))
    )
