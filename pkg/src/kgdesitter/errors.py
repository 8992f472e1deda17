"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised for invalid run configuration (bad chart, exponents, grid)."""


class DomainError(ValueError):
    """Raised when an argument lies outside the region an operation is defined on."""


class SolverError(RuntimeError):
    """Raised when a time integration is aborted (NaN, runaway energy)."""

    def __init__(self, message, step=None, x=None):
        super().__init__(message)
        self.step = step
        self.x = x


class SingularPotentialWarning(UserWarning):
    """The reduced potential is not bounded at x = 0 (metric has a linear term)."""
