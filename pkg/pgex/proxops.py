"""Closed-form proximal operators for the l1 norm and the scaled simplex."""

from typing import Optional

import numpy as np
from typing_extensions import Protocol

from ._exceptions import ArgumentError
from .types.common import Vector

SIMPLEX_SUM_TOL = 1e-12
# Feasibility slack of the simplex indicator; projections land well inside it.
SIMPLEX_INDICATOR_TOL = 1e-9


class ProxFn(Protocol):
    """Computes argmin_x { g(x) + ||x - v||^2 / (2*step) }."""

    def __call__(self, v: Vector, step: float) -> Vector: ...


def _check_finite(v: Vector, name: str = "v") -> Vector:
    v = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ArgumentError(f"{name} contains non-finite entries")
    return v


def soft_threshold(v: Vector, t: float) -> Vector:
    """Componentwise prox of t*||.||_1: sign(v_i) * max(|v_i| - t, 0), with sign(0) = 0.

    Raises:
        ArgumentError: If ``t < 0`` or ``v`` has non-finite entries
    """
    if not t >= 0:
        raise ArgumentError(f"threshold must be nonnegative, got {t}")
    v = _check_finite(v)
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def project_simplex(v: Vector, s: float) -> Vector:
    """Euclidean projection onto {x : e^T x = s, x >= 0}.

    Sort-based threshold method: sort descending, find the last index rho with
    u_rho - (cumsum_rho - s)/(rho + 1) > 0, shift by that threshold and clip at 0.

    Raises:
        ArgumentError: If ``s <= 0`` or ``v`` has non-finite entries
    """
    if not s > 0:
        raise ArgumentError(f"simplex scale must be positive, got {s}")
    v = _check_finite(v)
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - s
    ind = np.arange(1, v.shape[0] + 1)
    rho = np.nonzero(u - cssv / ind > 0)[0][-1]
    theta = cssv[rho] / (rho + 1.0)
    x = np.maximum(v - theta, 0.0)
    total = x.sum()
    if abs(total - s) > SIMPLEX_SUM_TOL * s:
        x *= s / total
    return x


def l1_value(x: Vector, lam: float, mask: Optional[np.ndarray] = None) -> float:
    """lam * ||x||_1, restricted to the coordinates selected by ``mask``."""
    if mask is not None:
        x = x[mask]
    return float(lam * np.abs(x).sum())


def l1_prox(lam: float, mask: Optional[np.ndarray] = None) -> ProxFn:
    """Prox of lam*||x[mask]||_1; unmasked coordinates pass through unchanged."""

    def prox(v: Vector, step: float) -> Vector:
        if mask is None:
            return soft_threshold(v, lam * step)
        out = np.array(v, dtype=np.float64)
        out[mask] = soft_threshold(out[mask], lam * step)
        return out

    return prox


def simplex_indicator(x: Vector, s: float) -> float:
    """0 on {e^T x = s, x >= 0} and +inf elsewhere."""
    if np.all(x >= 0.0) and abs(x.sum() - s) <= SIMPLEX_INDICATOR_TOL * max(1.0, s):
        return 0.0
    return float("inf")


def simplex_prox(s: float) -> ProxFn:
    """Prox of the simplex indicator; independent of the step size."""

    def prox(v: Vector, step: float) -> Vector:
        return project_simplex(v, s)

    return prox
