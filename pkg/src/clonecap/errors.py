"""Exception types raised across the package."""


class ClonecapError(Exception):
    """Base class for all package errors."""


class ShapeError(ClonecapError, ValueError):
    """Operand dimensions do not fit the requested operation."""


class DomainError(ClonecapError, ValueError):
    """A scalar parameter is outside its admissible range."""


class ContractError(ClonecapError, ValueError):
    """An input violates a documented precondition (Hermiticity, trace, ...)."""


class NotPSDError(ContractError):
    """A matrix has an eigenvalue below the clamping threshold."""


class ConsistencyError(ClonecapError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class CovarianceViolation(ClonecapError):
    """A channel failed its covariance check."""


class TruncationError(ClonecapError):
    """A truncated expansion cannot meet the requested accuracy."""

    def __init__(self, message, *, bound=None, requested=None):
        super().__init__(message)
        self.bound = bound
        self.requested = requested


class LiftInconsistency(ConsistencyError):
    """The generator-substituted Choi matrix disagrees with the direct one."""
