"""Tests for exception handling."""

from pgex._exceptions import (
    ArgumentError,
    ConfigurationError,
    ConvergenceError,
    InsufficientDataError,
    NumericalError,
    PgexError,
)
from pgex.types.linalg import EigenEstimate


def test_pgex_error():
    """Test base PgexError."""
    error = PgexError("Test error", iteration=12)
    assert str(error) == "Test error"
    assert error.message == "Test error"
    assert error.iteration == 12
    assert error.trace is None


def test_argument_error():
    """Test ArgumentError is also a ValueError."""
    error = ArgumentError()
    assert "Invalid argument" in str(error)
    assert isinstance(error, ValueError)

    custom_error = ArgumentError("Custom message")
    assert str(custom_error) == "Custom message"


def test_convergence_error_carries_estimate():
    """Test ConvergenceError keeps the best estimate."""
    best = EigenEstimate(value=2.0, residual=0.5, iterations=10)
    error = ConvergenceError(best_estimate=best)
    assert "did not converge" in str(error)
    assert error.best_estimate is best


def test_numerical_error():
    """Test NumericalError with iteration and trace."""
    error = NumericalError("non-finite iterate", iteration=3, trace=["partial"])
    assert error.iteration == 3
    assert error.trace == ["partial"]

    assert "Non-finite" in str(NumericalError())


def test_configuration_error():
    """Test ConfigurationError."""
    error = ConfigurationError()
    assert "Invalid configuration" in str(error)


def test_insufficient_data_error():
    """Test InsufficientDataError."""
    error = InsufficientDataError()
    assert "Not enough data" in str(error)


def test_error_inheritance():
    """Test exception inheritance."""
    assert issubclass(ArgumentError, PgexError)
    assert issubclass(ConvergenceError, PgexError)
    assert issubclass(NumericalError, PgexError)
    assert issubclass(ConfigurationError, PgexError)
    assert issubclass(InsufficientDataError, PgexError)
