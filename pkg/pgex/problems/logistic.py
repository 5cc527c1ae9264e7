"""l1-regularized logistic regression with an unpenalized intercept.

The variable is x = (x~, x0) in R^{n+1}; the intercept x0 is the last
coordinate, so the smooth part reads f(x) = sum_i log(1 + exp(-b_i (Dx)_i))
with D = [A, e].
"""

import logging
from typing import Optional

import numpy as np
from scipy.special import expit, xlogy

from .._exceptions import ArgumentError, NumericalError
from ..linalg import DEFAULT_TOL, gram_spectral_norm, lipschitz_modulus, robust_estimate
from ..objective import CompositeObjective
from ..proxops import l1_prox, l1_value
from ..types.common import Vector
from ..types.linalg import EigenEstimate
from ..types.problems import GapInfo, LogisticInstance
from ._random import make_rng
from .lasso import check_dims, sparse_signal

logger = logging.getLogger(__name__)

FEASIBILITY_WEIGHT = 50.0
MAX_LABEL_DRAWS = 100


def _penalty_mask(n: int) -> np.ndarray:
    mask = np.ones(n + 1, dtype=bool)
    mask[-1] = False
    return mask


def _loss_grad(inst: LogisticInstance, z: Vector) -> Vector:
    # grad p(z)_i = -b_i / (1 + exp(b_i z_i))
    return -inst.b * expit(-inst.b * z)


def logistic_dual(inst: LogisticInstance, u: Vector) -> float:
    """d(u) = -sum [q log q + (1 - q) log(1 - q)] with q = -b_i u_i and 0 log 0 = 0.

    Raises:
        NumericalError: If some -b_i u_i lies outside [0, 1]
    """
    q = -inst.b * u
    if np.any(q < 0.0) or np.any(q > 1.0):
        raise NumericalError("dual point has -b_i u_i outside [0, 1]")
    return float(-np.sum(xlogy(q, q) + xlogy(1.0 - q, 1.0 - q)))


def logistic_gap(inst: LogisticInstance, x: Vector) -> GapInfo:
    """Relative duality gap and weighted dual feasibility violation 50|e^T u| / max(||u||, 1)."""
    z = inst.D @ x
    penalty = l1_value(x, inst.lam, _penalty_mask(inst.A.shape[1]))
    F = float(np.sum(np.logaddexp(0.0, -inst.b * z))) + penalty
    w = _loss_grad(inst, z)
    sup = float(np.max(np.abs(inst.A.T @ w)))
    scale = 1.0 if sup <= inst.lam else inst.lam / sup
    u = scale * w
    d = logistic_dual(inst, u)
    feas = FEASIBILITY_WEIGHT * abs(float(u.sum())) / max(float(np.linalg.norm(u)), 1.0)
    return GapInfo(gap=abs(F - d) / max(F, 1.0), feas_violation=feas, dual_value=d, u=u)


def logistic_objective(inst: LogisticInstance, tol: float = DEFAULT_TOL) -> CompositeObjective:
    """Composite objective with L = 0.25 * lambda_max(D^T D) and l = 0.

    The prox soft-thresholds the first n coordinates and leaves the intercept alone.
    """
    D, b, lam = inst.D, inst.b, inst.lam
    n = inst.A.shape[1]
    mask = _penalty_mask(n)
    gram = robust_estimate(lambda: gram_spectral_norm(D, tol), "lambda_max(D^T D)")
    L = lipschitz_modulus(
        EigenEstimate(
            value=0.25 * gram.value, residual=0.25 * gram.residual, iterations=gram.iterations
        ),
        tol,
    )
    logger.debug("logistic %dx%d: L=%.6g", D.shape[0], n, L)

    def value(x: Vector) -> float:
        return float(np.sum(np.logaddexp(0.0, -b * (D @ x))))

    def grad(x: Vector) -> Vector:
        return D.T @ _loss_grad(inst, D @ x)

    return CompositeObjective(
        smooth_value=value,
        smooth_grad=grad,
        nonsmooth_value=lambda x: l1_value(x, lam, mask),
        prox=l1_prox(lam, mask),
        modulus_L=L,
        modulus_l=0.0,
        dim=n + 1,
        dual_gap=lambda x: logistic_gap(inst, x),
        name="logistic",
    )


def _labels(z: Vector) -> Vector:
    # sign(0) is taken as +1.
    return np.where(z >= 0.0, 1.0, -1.0)


def gen_logistic(
    m: int, n: int, s_sparsity: int, seed: int, lam: float = 5.0, c: Optional[float] = None
) -> LogisticInstance:
    """Random instance with labels b = sign(A x_true + c e), c uniform on [0, 1].

    When the labels come out all equal, c is redrawn (up to 100 draws).

    Raises:
        ArgumentError: If the dimensions are invalid or no draw of c gives mixed labels
    """
    check_dims(m, n, s_sparsity)
    rng = make_rng(seed)
    A = rng.standard_normal((m, n))
    x_true = sparse_signal(rng, n, s_sparsity)
    z = A @ x_true
    for draw in range(MAX_LABEL_DRAWS):
        offset = rng.uniform(0.0, 1.0) if c is None or draw > 0 else float(c)
        b = _labels(z + offset)
        if not np.all(b == b[0]):
            return LogisticInstance(A=A, b=b, lam=lam, c=offset, seed=seed, x_true=x_true)
        logger.warning("labels all equal with c=%.6g (seed %d); redrawing c", offset, seed)
    raise ArgumentError(f"could not draw mixed labels in {MAX_LABEL_DRAWS} attempts (seed {seed})")
