"""Seeded random streams for instance generation."""

import numpy as np

from .._exceptions import ArgumentError

# Bump the suffix whenever the sequence of draws in a generator changes.
GENERATOR_VERSION = "numpy-pcg64-ziggurat/1"


def _check_seed(seed: int, name: str = "seed") -> int:
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ArgumentError(f"{name} must be a nonnegative integer, got {seed!r}")
    return int(seed)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; normals are drawn with numpy's ziggurat sampler."""
    return np.random.Generator(np.random.PCG64(_check_seed(seed)))


def derive_seed(base_seed: int, index: int) -> int:
    """Independent per-instance seed for batch index ``index`` under ``base_seed``."""
    seq = np.random.SeedSequence([_check_seed(base_seed, "base_seed"), _check_seed(index, "index")])
    return int(seq.generate_state(1, dtype=np.uint32)[0])
