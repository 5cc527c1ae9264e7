"""Dense linear algebra: matrix-vector products and extremal eigenvalue estimates.

Eigenvalues are estimated by power iteration, which is all the Lipschitz moduli
of the problem families need. Every routine is deterministic: the first start
vector is the normalized all-ones vector, and a second pass from a fixed
pseudo-random vector confirms the result in case the all-ones start is
(nearly) orthogonal to the dominant eigenvector.
"""

import logging
from typing import Callable, Tuple

import numpy as np

from ._exceptions import ArgumentError, ConvergenceError
from ._utils import validate_positive
from .types.common import DenseMatrix, Vector
from .types.linalg import EigenEstimate

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 5000
SYMMETRY_TOL = 1e-12

# Seed of the confirmation start vector; part of the determinism contract.
_CONFIRM_SEED = 1234
_ROUNDOFF = 64.0 * np.finfo(np.float64).eps


def as_dense_matrix(entries, rows=None, cols=None) -> DenseMatrix:
    """Validate and return a dense float64 matrix.

    Args:
        entries: 2-D array-like, or a flat row-major sequence when ``rows`` and
            ``cols`` are given
        rows: Number of rows for flat input
        cols: Number of columns for flat input

    Raises:
        ArgumentError: On shape mismatch or non-finite entries
    """
    arr = np.asarray(entries, dtype=np.float64)
    if rows is not None or cols is not None:
        if rows is None or cols is None or rows < 1 or cols < 1:
            raise ArgumentError("rows and cols must both be positive integers")
        if arr.size != rows * cols:
            raise ArgumentError(f"got {arr.size} entries for a {rows}x{cols} matrix")
        arr = arr.reshape(rows, cols)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ArgumentError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError("matrix entries must be finite")
    return arr


def mat_vec(m: DenseMatrix, v: Vector) -> Vector:
    """Matrix-vector product ``m @ v``.

    Raises:
        ArgumentError: If ``len(v) != m.cols``
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != m.shape[1]:
        raise ArgumentError(f"dimension mismatch: {m.shape[1]} columns, vector {v.shape}")
    return m @ v


def _power_iteration(
    apply: Callable[[Vector], Vector],
    start: Vector,
    tol: float,
    max_iter: int,
) -> EigenEstimate:
    # Stops once ||Av - qv|| <= tol. The floor is the round-off level of A v,
    # below which no further iteration can reduce the residual.
    v = start / np.linalg.norm(start)
    value = 0.0
    residual = np.inf
    for it in range(max_iter + 1):
        w = apply(v)
        value = float(v @ w)
        residual = float(np.linalg.norm(w - value * v))
        if residual <= max(tol, _ROUNDOFF * abs(value)):
            return EigenEstimate(value=value, residual=residual, iterations=it + 1)
        v = w / np.linalg.norm(w)
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} in {max_iter} iterations "
        f"(value={value:.6g}, residual={residual:.3g})",
        best_estimate=EigenEstimate(value=value, residual=residual, iterations=max_iter + 1),
    )


def _dominant_psd(
    apply: Callable[[Vector], Vector], n: int, tol: float, max_iter: int
) -> EigenEstimate:
    """Largest eigenvalue of a positive semidefinite operator, with a confirmation pass."""
    first = _power_iteration(apply, np.ones(n), tol, max_iter)
    rng = np.random.default_rng(_CONFIRM_SEED + n)
    second = _power_iteration(apply, rng.standard_normal(n), tol, max_iter)
    best = second if second.value > first.value else first
    return EigenEstimate(
        value=best.value,
        residual=best.residual,
        iterations=first.iterations + second.iterations,
    )


def gram_spectral_norm(
    m: DenseMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> EigenEstimate:
    """Estimate lambda_max(m^T m) by power iteration on v -> m^T (m v).

    Args:
        m: Dense matrix
        tol: Absolute tolerance on ||A v - lambda v|| for a unit v
        max_iter: Iteration budget per pass

    Returns:
        EigenEstimate of the largest eigenvalue of the Gram matrix

    Raises:
        ArgumentError: If ``tol <= 0``
        ConvergenceError: If a pass does not converge; carries the best estimate
    """
    validate_positive(tol, name="tol")
    return _dominant_psd(lambda v: m.T @ (m @ v), m.shape[1], tol, max_iter)


def sym_extreme_eigs(
    m: DenseMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> Tuple[EigenEstimate, EigenEstimate]:
    """Estimate (lambda_max, lambda_min) of a symmetric matrix.

    lambda_max comes from power iteration on ``m + rho*I``, where ``rho`` is a
    rough estimate of the spectral radius, so the shifted operator is positive
    semidefinite. lambda_min then comes from power iteration on
    ``sigma*I - m`` with ``sigma`` the returned lambda_max.

    Raises:
        ArgumentError: If ``m`` is not square and symmetric within 1e-12 entrywise
        ConvergenceError: If a pass does not converge
    """
    validate_positive(tol, name="tol")
    n, cols = m.shape
    if n != cols:
        raise ArgumentError(f"matrix must be square, got shape {m.shape}")
    if not np.allclose(m, m.T, rtol=0.0, atol=SYMMETRY_TOL):
        raise ArgumentError("matrix must be symmetric")

    # The shift only needs to be roughly right.
    try:
        radius_sq = gram_spectral_norm(m, tol=1e-3, max_iter=max_iter)
    except ConvergenceError as exc:
        radius_sq = exc.best_estimate
    rho = float(np.sqrt(max(radius_sq.value, 0.0)))

    shifted = _dominant_psd(lambda v: m @ v + rho * v, n, tol, max_iter)
    lam_max = EigenEstimate(
        value=shifted.value - rho,
        residual=shifted.residual,
        iterations=radius_sq.iterations + shifted.iterations,
    )
    sigma = lam_max.value
    reflected = _dominant_psd(lambda v: sigma * v - m @ v, n, tol, max_iter)
    lam_min = EigenEstimate(
        value=sigma - reflected.value,
        residual=reflected.residual,
        iterations=reflected.iterations,
    )
    logger.debug("extreme eigenvalues: max=%.6g min=%.6g", lam_max.value, lam_min.value)
    return lam_max, lam_min


def lipschitz_modulus(estimate: EigenEstimate, tol: float = DEFAULT_TOL) -> float:
    """Inflate an eigenvalue estimate by (1 + 10*tol) so 1/L stays a valid step size."""
    return abs(estimate.value) * (1.0 + 10.0 * tol)


def robust_estimate(compute: Callable[[], EigenEstimate], what: str) -> EigenEstimate:
    """Run an estimate, falling back to ``value + residual`` on non-convergence."""
    try:
        return compute()
    except ConvergenceError as exc:
        best = exc.best_estimate
        logger.warning(
            "%s did not converge (residual %.3g); using the best estimate plus its residual",
            what,
            best.residual,
        )
        return EigenEstimate(
            value=best.value + best.residual, residual=best.residual, iterations=best.iterations
        )
