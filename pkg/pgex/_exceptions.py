"""Exception classes for the pgex solver library."""

from typing import Any, Optional


class PgexError(Exception):
    """Base exception for all pgex errors."""

    def __init__(
        self,
        message: str,
        *,
        iteration: Optional[int] = None,
        trace: Optional[Any] = None,
    ):
        super().__init__(message)
        self.message = message
        self.iteration = iteration
        self.trace = trace


class ArgumentError(PgexError, ValueError):
    """Raised when an argument violates an operation's precondition."""

    def __init__(self, message: str = "Invalid argument", **kwargs):
        super().__init__(message, **kwargs)


class ConvergenceError(PgexError):
    """Raised when an iterative routine exhausts its iteration budget.

    The best estimate reached so far is attached as ``best_estimate``.
    """

    def __init__(
        self,
        message: str = "Iteration did not converge",
        *,
        best_estimate: Optional[Any] = None,
        **kwargs,
    ):
        super().__init__(message, **kwargs)
        self.best_estimate = best_estimate


class NumericalError(PgexError):
    """Raised when a non-finite value appears in an iterate, gradient or dual point."""

    def __init__(self, message: str = "Non-finite value encountered", **kwargs):
        super().__init__(message, **kwargs)


class ConfigurationError(PgexError):
    """Raised when solver or experiment settings are inconsistent."""

    def __init__(self, message: str = "Invalid configuration", **kwargs):
        super().__init__(message, **kwargs)


class InsufficientDataError(PgexError):
    """Raised when a rate fit has too few points to be meaningful."""

    def __init__(self, message: str = "Not enough data points for a rate fit", **kwargs):
        super().__init__(message, **kwargs)
