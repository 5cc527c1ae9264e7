"""Nonconvex quadratic program over a scaled simplex.

    min 1/2 x^T A x - b^T x   subject to   e^T x = s, x >= 0

with A symmetric indefinite. Splitting A into its positive and negative
semidefinite parts gives moduli L = max(lambda_max, |lambda_min|) and
l = |lambda_min|.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from .._exceptions import ArgumentError, ConvergenceError
from ..linalg import (
    DEFAULT_TOL,
    gram_spectral_norm,
    lipschitz_modulus,
    robust_estimate,
    sym_extreme_eigs,
)
from ..objective import CompositeObjective
from ..proxops import project_simplex, simplex_indicator, simplex_prox
from ..types.common import DenseMatrix, Vector
from ..types.linalg import EigenEstimate
from ..types.problems import SimplexQpInstance
from ._random import make_rng

logger = logging.getLogger(__name__)


def qp_moduli(A: DenseMatrix, tol: float = DEFAULT_TOL) -> Tuple[float, float]:
    """(L, l) for a symmetric A, inflated for use as step-size moduli.

    If the extreme-eigenvalue passes do not converge, both moduli fall back to
    the spectral radius, which bounds |lambda_max| and |lambda_min|.
    """
    try:
        lam_max, lam_min = sym_extreme_eigs(A, tol)
    except ConvergenceError:
        gram = robust_estimate(lambda: gram_spectral_norm(A, tol), "lambda_max(A^T A)")
        radius = float(np.sqrt(gram.value))
        logger.warning("extreme eigenvalues did not converge; using spectral radius %.6g", radius)
        estimate = EigenEstimate(value=radius, residual=0.0, iterations=gram.iterations)
        modulus = lipschitz_modulus(estimate, tol)
        return modulus, modulus
    l = lipschitz_modulus(lam_min, tol) if lam_min.value < 0 else abs(lam_min.value)
    top = lam_max if abs(lam_max.value) >= abs(lam_min.value) else lam_min
    L = max(lipschitz_modulus(top, tol), l)
    return L, l


def qp_objective(inst: SimplexQpInstance, tol: float = DEFAULT_TOL) -> CompositeObjective:
    """Composite objective with the simplex indicator as nonsmooth part."""
    A, b, s = inst.A, inst.b, inst.s
    L, l = qp_moduli(A, tol)
    logger.debug("qp n=%d: L=%.6g l=%.6g", A.shape[0], L, l)

    def value(x: Vector) -> float:
        return float(0.5 * (x @ (A @ x)) - b @ x)

    def grad(x: Vector) -> Vector:
        return A @ x - b

    return CompositeObjective(
        smooth_value=value,
        smooth_grad=grad,
        nonsmooth_value=lambda x: simplex_indicator(x, s),
        prox=simplex_prox(s),
        modulus_L=L,
        modulus_l=l,
        dim=A.shape[0],
        name="qp",
    )


def qp_start(inst: SimplexQpInstance) -> Vector:
    """Projection of the origin onto the simplex, s/n * e."""
    return project_simplex(np.zeros(inst.A.shape[0]), inst.s)


def gen_qp(n: int, seed: int, s: Optional[float] = None) -> SimplexQpInstance:
    """Random instance: A = D + D^T with Gaussian D, Gaussian b and s = max(1, 10 t).

    Args:
        n: Dimension
        seed: Generator seed
        s: Fixed simplex scale; the random draw of t still happens so b and A do not
            depend on whether ``s`` is given
    """
    if n < 1:
        raise ArgumentError(f"dimension must be positive, got n={n}")
    rng = make_rng(seed)
    D = rng.standard_normal((n, n))
    A = D + D.T
    b = rng.standard_normal(n)
    t = rng.uniform(0.0, 1.0)
    scale = max(1.0, 10.0 * t) if s is None else s
    return SimplexQpInstance(A=A, b=b, s=scale, seed=seed)
