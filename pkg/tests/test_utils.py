"""Tests for utility functions."""

from pathlib import Path

import numpy as np
import pytest

from pgex._exceptions import ArgumentError
from pgex._utils import (
    format_float,
    get_log_level_from_env,
    get_output_dir_from_env,
    get_workers_from_env,
    validate_positive,
    validate_vector,
)


def test_get_output_dir_from_env(monkeypatch):
    """Test getting the output directory from environment."""
    monkeypatch.setenv("PGEX_OUTPUT_DIR", "/tmp/pgex-runs")
    assert get_output_dir_from_env() == Path("/tmp/pgex-runs")


def test_get_output_dir_from_env_none(monkeypatch):
    """Test output directory when not set."""
    monkeypatch.delenv("PGEX_OUTPUT_DIR", raising=False)
    assert get_output_dir_from_env() is None


def test_get_log_level_from_env(monkeypatch):
    """Test log level lookup and its default."""
    monkeypatch.delenv("PGEX_LOG_LEVEL", raising=False)
    assert get_log_level_from_env() == "WARNING"

    monkeypatch.setenv("PGEX_LOG_LEVEL", "debug")
    assert get_log_level_from_env() == "DEBUG"


def test_get_log_level_from_env_invalid(monkeypatch):
    """Test unknown log level."""
    monkeypatch.setenv("PGEX_LOG_LEVEL", "chatty")
    with pytest.raises(ValueError, match="Unknown log level"):
        get_log_level_from_env()


def test_get_workers_from_env(monkeypatch):
    """Test worker count lookup."""
    monkeypatch.delenv("PGEX_WORKERS", raising=False)
    assert get_workers_from_env() is None

    monkeypatch.setenv("PGEX_WORKERS", "3")
    assert get_workers_from_env() == 3

    monkeypatch.setenv("PGEX_WORKERS", "0")
    with pytest.raises(ValueError, match="positive integer"):
        get_workers_from_env()


def test_validate_vector_valid():
    """Test validating a list into a float vector."""
    v = validate_vector([1, 2, 3], 3, name="x0")
    assert v.dtype == np.float64
    np.testing.assert_array_equal(v, [1.0, 2.0, 3.0])


def test_validate_vector_wrong_length():
    """Test validating a vector of the wrong length."""
    with pytest.raises(ArgumentError, match="x0 has length 2, expected 3"):
        validate_vector([1.0, 2.0], 3, name="x0")


def test_validate_vector_non_finite():
    """Test validating a vector with NaN."""
    with pytest.raises(ArgumentError, match="non-finite"):
        validate_vector([1.0, np.nan])


def test_validate_vector_matrix():
    """Test validating a 2-D input."""
    with pytest.raises(ArgumentError, match="one-dimensional"):
        validate_vector(np.eye(2))


def test_validate_positive():
    """Test validating positive scalars."""
    assert validate_positive(2, name="tol") == 2.0
    assert validate_positive(0.0, name="alpha", allow_zero=True) == 0.0
    with pytest.raises(ArgumentError, match="tol must be finite and positive"):
        validate_positive(0.0, name="tol")
    with pytest.raises(ArgumentError):
        validate_positive(float("inf"), name="tol")


def test_format_float():
    """Test 17-significant-digit formatting round-trips."""
    value = 0.1 + 0.2
    assert float(format_float(value)) == value
    assert format_float(5.0) == "5"
    assert format_float(None) == ""
