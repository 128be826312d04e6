"""Exception hierarchy shared by every confinedgas module."""


class ConfinedGasError(Exception):
    """Base class for all library errors."""


class DomainError(ConfinedGasError):
    """Argument outside the mathematical domain of an operation."""


class AccuracyError(ConfinedGasError):
    """A requested error bound could not be certified.

    ``achieved`` carries the best bound that was reached, when known.
    """

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class GeometryError(ConfinedGasError):
    """Invalid or degenerate container geometry."""


class ModelError(ConfinedGasError):
    """The asymptotic expansion is meaningless for these inputs."""


class SingularityError(ConfinedGasError):
    """A closed-form denominator fell below the safe threshold."""


class NoBracketError(ConfinedGasError):
    """No sign change found while bracketing a root."""


class NonMonotoneError(ConfinedGasError):
    """Residual is not monotone across the bracket; model invalid here."""


class ResourceError(ConfinedGasError):
    """Requested enumeration exceeds the configured resource cap."""


class ConvergenceError(ConfinedGasError):
    """An iterative scheme failed to converge."""


class TruncationError(ConfinedGasError):
    """A truncated sum cannot certify the requested accuracy."""
