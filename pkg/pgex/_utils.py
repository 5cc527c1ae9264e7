"""Utility functions for pgex: environment configuration, validation and formatting."""

import logging
import math
import os
from pathlib import Path
from typing import Optional

import numpy as np

from ._exceptions import ArgumentError
from .types.common import Vector

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def get_output_dir_from_env() -> Optional[Path]:
    """Get the experiment output directory from environment variables.

    Returns:
        Path from PGEX_OUTPUT_DIR if set, None otherwise
    """
    value = os.environ.get("PGEX_OUTPUT_DIR")
    return Path(value) if value else None


def get_log_level_from_env() -> str:
    """Get the log level from PGEX_LOG_LEVEL, defaulting to WARNING.

    Raises:
        ValueError: If the variable holds an unknown level name
    """
    level = os.environ.get("PGEX_LOG_LEVEL", "WARNING").upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"Unknown log level: {level}. Expected one of: {', '.join(LOG_LEVELS)}")
    return level


def get_workers_from_env() -> Optional[int]:
    """Get the batch worker count from PGEX_WORKERS.

    Returns:
        Worker count if set, None otherwise

    Raises:
        ValueError: If the value is not a positive integer
    """
    value = os.environ.get("PGEX_WORKERS")
    if not value:
        return None
    workers = int(value)
    if workers < 1:
        raise ValueError("PGEX_WORKERS must be a positive integer")
    return workers


def configure_logging(level: str) -> None:
    """Configure root logging for command-line use."""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def validate_vector(v, dim: Optional[int] = None, *, name: str = "vector") -> Vector:
    """Validate a real vector and return it as a float64 array.

    Args:
        v: Array-like input
        dim: Required length, if any
        name: Name used in error messages

    Returns:
        One-dimensional float64 array (a copy when a conversion was needed)

    Raises:
        ArgumentError: If the input is not one-dimensional, has the wrong length
            or contains non-finite entries
    """
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ArgumentError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ArgumentError(f"{name} has length {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError(f"{name} contains non-finite entries")
    return arr


def validate_positive(value: float, *, name: str, allow_zero: bool = False) -> float:
    """Validate that a scalar is finite and positive (or nonnegative)."""
    if not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        bound = "nonnegative" if allow_zero else "positive"
        raise ArgumentError(f"{name} must be finite and {bound}, got {value}")
    return float(value)


def format_float(value: Optional[float]) -> str:
    """Format a float with 17 significant digits; None becomes an empty field."""
    if value is None:
        return ""
    return f"{value:.17g}"
