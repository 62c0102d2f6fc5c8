"""Colorful simplicial depth toolkit.

Exact depth counting over colored point sets, exact planar deep-point
search, instance generators, Monte Carlo containment probabilities for
measure families, and an exact table of the known selection constants.
"""

from .bounds import BoundsRow, ParityGapReport, bounds_row, parity_gap_lemma_check
from .constructions import (
    Coloring,
    GaussianRandom,
    GeneratorSpec,
    MomentCurve,
    StretchedGrid,
    UniformRandom,
    generate,
)
from .depth import (
    DepthMethod,
    DepthResult,
    MaxDepthResult,
    SearchMethod,
    SelectionBoundReport,
    VerifyMode,
    colorful_depth_bruteforce,
    colorful_depth_sweep2d,
    depth_at,
    max_depth_heuristic,
    monochromatic_depth_bruteforce,
    selection_bound_value,
    verify_selection_bound,
)
from .arrangement import max_depth_exact2d
from .errors import (
    ConfigInvalid,
    CsdepthError,
    DatasetUnreadable,
    DegenerateSimplex,
    DimensionMismatch,
    DimensionNotTwo,
    EmptyClass,
    GeneralPositionUnreachable,
    GeneralPositionViolation,
    InvalidMeasure,
    NonpositiveBudget,
    NonpositiveDimension,
    NonpositiveMagnitude,
    OutOfRange,
    TheoremViolation,
)
from .geometry import (
    ColoredPointSet,
    GeneralPositionReport,
    Point,
    Simplex,
    as_fraction,
    contains,
    general_position_check,
    orientation,
    orientation_det,
    perturb,
    separating_facet,
)
from .measures import (
    EstimateResult,
    Gaussian,
    MeasureFamily,
    MollificationReport,
    MollifiedEmpirical,
    UniformBall,
    UniformBox,
    containment_probability,
    deep_point_search,
    family_from_json,
    mollification_convergence_check,
    mollify,
    psi_acceptance_rate,
    psi_expected_acceptance,
    psi_integral,
    sample,
)

__version__ = "0.1.0"
