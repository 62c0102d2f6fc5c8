"""Seeded random number generation.

All randomness in the package flows through numpy's PCG64 bit generator,
created from an explicit 64-bit seed. Identical seeds give identical
streams within this implementation; no global or environment-derived
seeding is ever used.

Exact rational draws are built from integer draws on a fixed grid so the
output is reproducible and representable without floating point.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

# Grid resolution for rational draws: offsets land on multiples of 1/RATIONAL_SCALE.
RATIONAL_SCALE = 2**31


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for the given 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """n independent child generators derived deterministically from seed."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)]


def rational_uniform(rng: np.random.Generator, magnitude: Fraction) -> Fraction:
    """One rational draw, uniform on the grid points of [-magnitude, +magnitude]."""
    k = int(rng.integers(-RATIONAL_SCALE, RATIONAL_SCALE + 1))
    return magnitude * Fraction(k, RATIONAL_SCALE)


def rational_uniform_in(rng: np.random.Generator, lo: Fraction, hi: Fraction) -> Fraction:
    """One rational draw, uniform on the grid points of [lo, hi]."""
    k = int(rng.integers(0, RATIONAL_SCALE + 1))
    return lo + (hi - lo) * Fraction(k, RATIONAL_SCALE)
