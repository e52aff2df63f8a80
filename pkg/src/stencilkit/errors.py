"""Exception types raised across stencilkit."""


class StencilError(Exception):
    """Base class for every error raised by this package."""


class EmptyStencilError(StencilError):
    pass


class DimMismatchError(StencilError, ValueError):
    pass


class PowerMismatchError(StencilError, ValueError):
    pass


class ZeroScaleError(StencilError, ValueError):
    pass


class TruncationTooSmallError(StencilError):
    """Every Taylor coefficient below the truncation order vanished."""


class NotNormalizedError(StencilError):
    """The leading Taylor coefficient is not one, or the h-scaling is inconsistent."""


class AccuracyExceedsTruncationError(StencilError):
    """No error term was found below the truncation order."""


class MixedLeadingOrderError(StencilError):
    """Several multi-indices compete for the lowest derivative order."""


class UnsupportedAccuracyError(StencilError, ValueError):
    pass


class SingularSystemError(StencilError):
    pass


class CompositionAccuracyError(StencilError, AssertionError):
    pass


class NotDissipativeError(StencilError):
    pass


class UnstableForAllDtError(StencilError):
    pass


class StencilWiderThanGridError(StencilError, ValueError):
    pass


class ShapeMismatchError(StencilError, ValueError):
    pass


class NonPeriodicError(StencilError, ValueError):
    pass


class NoConvergenceError(StencilError):
    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
