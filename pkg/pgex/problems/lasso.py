"""LASSO: min 1/2 ||Ax - b||^2 + lam ||x||_1."""

import logging

import numpy as np

from .._exceptions import ArgumentError
from ..linalg import DEFAULT_TOL, gram_spectral_norm, lipschitz_modulus, robust_estimate
from ..objective import CompositeObjective
from ..proxops import l1_prox, l1_value
from ..types.common import Vector
from ..types.problems import GapInfo, LassoInstance
from ._random import make_rng

logger = logging.getLogger(__name__)

NOISE_SCALE = 0.01


def lasso_dual(inst: LassoInstance, u: Vector) -> float:
    """d(u) = -1/2 ||u||^2 - b^T u."""
    return float(-0.5 * (u @ u) - inst.b @ u)


def lasso_gap(inst: LassoInstance, x: Vector) -> GapInfo:
    """Relative duality gap at ``x`` with the scaled dual point.

    The residual Ax - b is scaled by min(1, lam / ||A^T (Ax - b)||_inf) so that
    ||A^T u||_inf <= lam.
    """
    r = inst.A @ x - inst.b
    F = 0.5 * float(r @ r) + l1_value(x, inst.lam)
    sup = float(np.max(np.abs(inst.A.T @ r)))
    scale = 1.0 if sup <= inst.lam else inst.lam / sup
    u = scale * r
    d = lasso_dual(inst, u)
    return GapInfo(gap=abs(F - d) / max(F, 1.0), dual_value=d, u=u)


def lasso_objective(inst: LassoInstance, tol: float = DEFAULT_TOL) -> CompositeObjective:
    """Composite objective with L = lambda_max(A^T A) and l = 0.

    Args:
        inst: LASSO instance
        tol: Power-iteration tolerance for L
    """
    A, b, lam = inst.A, inst.b, inst.lam
    estimate = robust_estimate(lambda: gram_spectral_norm(A, tol), "lambda_max(A^T A)")
    L = lipschitz_modulus(estimate, tol)
    logger.debug("lasso %dx%d: L=%.6g", A.shape[0], A.shape[1], L)

    def value(x: Vector) -> float:
        r = A @ x - b
        return 0.5 * float(r @ r)

    def grad(x: Vector) -> Vector:
        return A.T @ (A @ x - b)

    return CompositeObjective(
        smooth_value=value,
        smooth_grad=grad,
        nonsmooth_value=lambda x: l1_value(x, lam),
        prox=l1_prox(lam),
        modulus_L=L,
        modulus_l=0.0,
        dim=A.shape[1],
        dual_gap=lambda x: lasso_gap(inst, x),
        name="lasso",
    )


def sparse_signal(rng: np.random.Generator, n: int, s_sparsity: int) -> Vector:
    """Vector with ``s_sparsity`` standard Gaussian entries on a uniformly drawn support."""
    x = np.zeros(n)
    support = rng.choice(n, size=s_sparsity, replace=False)
    x[np.sort(support)] = rng.standard_normal(s_sparsity)
    return x


def check_dims(m: int, n: int, s_sparsity: int) -> None:
    if m < 1 or n < 1:
        raise ArgumentError(f"dimensions must be positive, got m={m}, n={n}")
    if not 1 <= s_sparsity <= n:
        raise ArgumentError(f"sparsity must lie in [1, n={n}], got {s_sparsity}")


def gen_lasso(m: int, n: int, s_sparsity: int, seed: int, lam: float = 5.0) -> LassoInstance:
    """Random instance: Gaussian A, s-sparse Gaussian x_true and b = A x_true + 0.01 noise.

    Raises:
        ArgumentError: If the dimensions are not positive or s_sparsity > n
    """
    check_dims(m, n, s_sparsity)
    rng = make_rng(seed)
    A = rng.standard_normal((m, n))
    x_true = sparse_signal(rng, n, s_sparsity)
    b = A @ x_true + NOISE_SCALE * rng.standard_normal(m)
    return LassoInstance(A=A, b=b, lam=lam, seed=seed, x_true=x_true)
