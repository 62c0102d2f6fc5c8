"""Exception hierarchy shared across the package.

Every error raised by the library derives from CsdepthError so callers
(and the CLI) can distinguish library failures from programming errors.
"""


class CsdepthError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(CsdepthError):
    """Points of different dimensions, or the wrong number of points."""


class DegenerateSimplex(CsdepthError):
    """Simplex vertices are affinely dependent."""


class NonpositiveMagnitude(CsdepthError):
    """Perturbation magnitude must be > 0."""


class GeneralPositionViolation(CsdepthError):
    """Some d+1 of the relevant points are affinely dependent.

    Carries a witness tuple of point indices when available.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DimensionNotTwo(CsdepthError):
    """Operation is only defined in the plane."""


class NonpositiveBudget(CsdepthError):
    """Search budget must be > 0."""


class EmptyClass(CsdepthError):
    """Every color class must contain at least one point."""


class InvalidMeasure(CsdepthError):
    """Measure parameters do not define an absolutely continuous probability measure."""


class NonpositiveDimension(CsdepthError):
    """Dimension must be >= 1."""


class OutOfRange(CsdepthError):
    """Argument outside its required interval."""


class GeneralPositionUnreachable(CsdepthError):
    """Generator retry budget exhausted without reaching general position."""


class TheoremViolation(CsdepthError):
    """An exact search fell below a proven lower bound; indicates a bug.

    Carries the offending report for diagnostics.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigInvalid(CsdepthError):
    """Experiment configuration failed validation."""


class DatasetUnreadable(CsdepthError):
    """Dataset file missing or malformed."""
