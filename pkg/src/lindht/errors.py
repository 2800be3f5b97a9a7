"""Exception types shared across the package."""


class LindhtError(Exception):
    """Base class for package-specific errors."""


class DomainError(LindhtError, ValueError):
    """An argument lies outside its mathematical domain."""


class ZeroMatrixError(LindhtError):
    """Operation undefined for the all-zero matrix."""


class BudgetExceededError(LindhtError):
    """An exhaustive sweep or enumeration would exceed the configured budget."""


class DimensionMismatchError(LindhtError, ValueError):
    """Operands have incompatible shapes."""


class SolverFailureError(LindhtError):
    """The LP solver did not terminate cleanly (distinct from infeasibility)."""


class NoConvergenceError(LindhtError):
    """Iterative fitting did not reach tolerance within the iteration cap."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class SupportViolationError(LindhtError):
    """A constraint marginal puts mass where the target distribution has none."""
