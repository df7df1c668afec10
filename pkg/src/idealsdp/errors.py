"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionError(ValueError):
    """Shapes or degrees are incompatible."""


class ConfigError(ValueError):
    """A configuration is incomplete or contains unknown keys."""


class PreconditionError(ValueError):
    """A documented precondition of an operation does not hold."""


class AmbiguityError(DomainError):
    """A root maps to more than one admissible direction (spatial aliasing)."""


class FactorizationError(ValueError):
    """A matrix expected to be positive definite could not be factorized."""


class MetricUndefinedError(ValueError):
    """A beampattern metric has no samples to be computed from."""


class SolverFailure(RuntimeError):
    """A design solve ended with a status other than ``optimal``."""

    def __init__(self, context: str, status: str, message: str = ""):
        self.context = context
        self.status = status
        detail = f": {message}" if message else ""
        super().__init__(f"{context}: solver status {status}{detail}")
