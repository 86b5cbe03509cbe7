"""Exception types shared across the engine.

The CLI and the HTTP service map these onto exit codes / status codes:
validation and domain errors are caller mistakes, numerical check failures
mean a tolerance was exceeded, everything else is an internal bug.
"""


class EngineError(Exception):
    """Base class for all engine errors."""


class ValidationError(EngineError, ValueError):
    """An input field violates its contract. Message names the field."""


class DomainError(EngineError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class UnsupportedKernelError(EngineError, TypeError):
    """Operation is undefined for the given impact kernel."""


class UnboundedSolutionError(EngineError):
    """The variational problem has no finite stationary point.

    Raised for a risk-neutral trader facing non-decaying alpha: the optimal
    position grows without bound.
    """


class ResidualCheckError(EngineError):
    """A constructed trajectory failed its stationarity self-check."""


class AssemblyError(EngineError):
    """Internal matrix assembly produced an invalid (non-SPD) system.

    Must never fire for valid inputs; indicates a bug, not a user error.
    """
