"""
Exception hierarchy for the max-plus engine.
Every error is a ValueError so callers that only care about "bad input" can catch that.
"""


class TropicalError(ValueError):
    """Base class for all semantic errors raised by the engine."""


class DimensionMismatchError(TropicalError):
    """Operands have incompatible shapes."""


class NonFiniteScalingError(TropicalError):
    """A diagonal scaling vector contains the semiring zero or a non-finite float."""


class ClosureDivergenceError(TropicalError):
    """Kleene star requested for a matrix with a positive cycle mean."""


class AcyclicMatrixError(TropicalError):
    """The digraph of the matrix has no cycle, so the cycle mean is the semiring zero."""


class ReducibleMatrixError(TropicalError):
    """The operation requires an irreducible matrix."""


class NotStronglyConnectedError(TropicalError):
    pass


class EdgelessDigraphError(TropicalError):
    pass


class AcyclicDigraphError(TropicalError):
    pass


class CapExceededError(TropicalError):
    """No periodicity was detected before the search cap."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


class NonCriticalNodeError(TropicalError):
    pass


class BoundParameterError(TropicalError):
    """Inconsistent parameters passed to a bound formula."""


class InvalidFactorizationError(TropicalError):
    pass


class InvalidWalkError(TropicalError):
    pass


class NotHamiltonianError(TropicalError):
    pass


class ConsistencyError(TropicalError):
    """An internal post-check failed. This always indicates a defect."""
