"""Exception types shared across the package."""


class LabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LabError, ValueError):
    """An argument lies outside the operation's domain."""


class UnsupportedPathLengthError(DomainError):
    """Path counting was requested for a length the engine refuses.

    Counting is exact and limited to 2- and 3-edge paths; longer lengths
    would require enumerating a combinatorially exploding path set, and a
    silent approximation would corrupt the Poisson count checks downstream.
    """


class QuadratureError(LabError, ArithmeticError):
    """Adaptive refinement failed to meet the requested tolerance."""


class InversionError(LabError, ArithmeticError):
    """Quantile bracketing could not straddle the target CDF value."""


class InsufficientSampleError(DomainError):
    """A statistical test received fewer samples than its minimum."""


class ZeroVarianceError(LabError, ArithmeticError):
    """Correlation is undefined because one coordinate is constant."""
