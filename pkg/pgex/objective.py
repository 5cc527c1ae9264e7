"""Composite objective F = f + g, the forward-backward step and stationarity residual."""

import math
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ._exceptions import ArgumentError, NumericalError
from .types.common import Vector
from .types.problems import GapInfo
from .types.solver import StepResult

# Tolerance when comparing an input coefficient against the threshold it was derived from.
THRESHOLD_RTOL = 1e-12


class CompositeObjective(BaseModel):
    """F(x) = f(x) + g(x) with f smooth, g prox-friendly, and moduli L >= l >= 0.

    ``modulus_L`` and ``modulus_l`` are the gradient Lipschitz moduli of a DC split
    f = f1 - f2 with f1, f2 convex; l = 0 when f itself is convex.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    smooth_value: Callable[[Vector], float]
    smooth_grad: Callable[[Vector], Vector]
    nonsmooth_value: Callable[[Vector], float]
    prox: Callable[[Vector, float], Vector] = Field(..., description="ProxFn of g")
    modulus_L: float = Field(..., gt=0.0)
    modulus_l: float = Field(0.0, ge=0.0)
    dim: int = Field(..., ge=1)
    dual_gap: Optional[Callable[[Vector], GapInfo]] = Field(
        None, description="Duality gap hook for convex families"
    )
    name: str = "objective"

    @model_validator(mode="after")
    def _check_moduli(self) -> "CompositeObjective":
        if self.modulus_L < self.modulus_l:
            raise ValueError(
                f"modulus_L ({self.modulus_L}) must be at least modulus_l ({self.modulus_l})"
            )
        return self


def objective_value(obj: CompositeObjective, x: Vector) -> float:
    """F(x); +inf outside dom g."""
    g = obj.nonsmooth_value(x)
    if math.isinf(g):
        return g
    return obj.smooth_value(x) + g


def in_domain(obj: CompositeObjective, x: Vector) -> bool:
    return obj.nonsmooth_value(x) < math.inf


def _prox_gradient_point(
    obj: CompositeObjective, y: Vector, iteration: Optional[int]
) -> Tuple[Vector, Vector]:
    grad = obj.smooth_grad(y)
    if not np.all(np.isfinite(grad)):
        where = f"iterate {iteration}" if iteration is not None else "the given point"
        raise NumericalError(f"non-finite gradient at {where}", iteration=iteration)
    step = 1.0 / obj.modulus_L
    return obj.prox(y - step * grad, step), grad


def forward_backward_step(
    obj: CompositeObjective, y: Vector, *, iteration: Optional[int] = None
) -> StepResult:
    """x_next = prox(y - grad f(y)/L, 1/L), with F(x_next) evaluated eagerly.

    Args:
        obj: Composite objective
        y: Extrapolated point
        iteration: Iteration index used in error messages

    Raises:
        NumericalError: If the gradient at ``y`` is not finite
    """
    x_next, grad = _prox_gradient_point(obj, y, iteration)
    return StepResult(
        x_next=x_next, f_grad_at_y=grad, objective_at_next=objective_value(obj, x_next)
    )


def stationarity_residual(
    obj: CompositeObjective, x: Vector, *, iteration: Optional[int] = None
) -> float:
    """||prox(x - grad f(x)/L, 1/L) - x||; zero exactly at stationary points."""
    x_plus, _ = _prox_gradient_point(obj, x, iteration)
    return float(np.linalg.norm(x_plus - x))


def beta_threshold(L: float, l: float) -> float:
    """sqrt(L / (L + l)), the admissible bound on extrapolation coefficients.

    Raises:
        ArgumentError: If not L >= l >= 0 with L > 0
    """
    if not (L > 0 and 0 <= l <= L):
        raise ArgumentError(f"moduli must satisfy L >= l >= 0 and L > 0, got L={L}, l={l}")
    return math.sqrt(L / (L + l))


def alpha_window(L: float, l: float, beta_bar: float) -> Tuple[float, float]:
    """Admissible Lyapunov weights [(L + l)/2 * beta_bar^2, L/2].

    Raises:
        ArgumentError: If beta_bar lies outside [0, sqrt(L/(L + l))]
    """
    threshold = beta_threshold(L, l)
    if not (0 <= beta_bar <= threshold * (1.0 + THRESHOLD_RTOL)):
        raise ArgumentError(f"beta_bar={beta_bar} outside [0, {threshold}]")
    lower = min(0.5 * (L + l) * beta_bar**2, 0.5 * L)
    return lower, 0.5 * L
