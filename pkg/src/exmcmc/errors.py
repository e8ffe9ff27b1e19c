"""Exception types shared across the package."""


class ExmcmcError(Exception):
    """Base class for all package-specific errors."""


class ReversalUndefinedError(ExmcmcError):
    """Reversal requested for a target with a zero-mass state."""


class StationarityViolationError(ExmcmcError):
    """Target is not stationary for the kernel."""

    def __init__(self, message: str, max_residual: float):
        super().__init__(message)
        self.max_residual = max_residual


class DimensionMismatchError(ExmcmcError):
    """Kernel and distribution do not share the same state list."""


class UnsupportedRepresentationError(ExmcmcError):
    """Matrix-only operation applied to a kernel without a matrix form."""


class TreeValidationError(ExmcmcError):
    """Marked tree violates a structural invariant."""


class TreeFormatError(ExmcmcError):
    """Marked-tree text could not be parsed."""


class MatrixFormatError(ExmcmcError):
    """Binary-matrix text could not be parsed."""


class InvalidStatisticError(ExmcmcError):
    """A test statistic evaluated to NaN."""


class TractabilityError(ExmcmcError):
    """Exact enumeration would exceed the size guard."""


class NotReversibleError(ExmcmcError):
    """Operation requires a kernel flagged as reversible."""


class ConfigError(ExmcmcError):
    """Experiment configuration is invalid."""
