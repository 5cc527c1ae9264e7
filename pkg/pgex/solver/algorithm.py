"""Proximal gradient method with extrapolation.

Starting from x^{-1} = x^0, every iteration forms

    y^k     = x^k + beta_k (x^k - x^{k-1})
    x^{k+1} = prox_{g/L}(y^k - grad f(y^k) / L)

with beta_k drawn from a :class:`BetaSchedule`. Record k of the trace describes
x^k; its ``beta`` column holds the coefficient that produced x^k (0 for k = 0).
"""

import logging
from typing import Optional

import numpy as np

from .._exceptions import ArgumentError, ConfigurationError, NumericalError
from .._utils import validate_vector
from ..diagnostics import lyapunov_value
from ..objective import (
    THRESHOLD_RTOL,
    CompositeObjective,
    alpha_window,
    beta_threshold,
    forward_backward_step,
    in_domain,
    objective_value,
    stationarity_residual,
)
from ..types.common import TerminationReason, Vector
from ..types.solver import IterateTrace, SolveResult, TraceRecord
from .schedules import BetaSchedule, adaptive_restart_triggered
from .termination import TerminationRule, check_termination

logger = logging.getLogger(__name__)


def resolve_alpha(
    obj: CompositeObjective, schedule: BetaSchedule, alpha: Optional[float]
) -> float:
    """Validate ``alpha`` against the admissible window, or pick the window midpoint.

    Outside the admissible range (heuristic schedules) no window exists; the
    default is then L/2.

    Raises:
        ArgumentError: If ``alpha`` is given and lies outside the window
    """
    L, l = obj.modulus_L, obj.modulus_l
    beta_bar = schedule.beta_bar(L, l)
    if beta_bar > beta_threshold(L, l) * (1.0 + THRESHOLD_RTOL):
        return 0.5 * L if alpha is None else float(alpha)
    lower, upper = alpha_window(L, l, beta_bar)
    if alpha is None:
        return 0.5 * (lower + upper)
    slack = THRESHOLD_RTOL * upper
    if not (lower - slack <= alpha <= upper + slack):
        raise ArgumentError(f"alpha={alpha} outside the admissible window [{lower}, {upper}]")
    return float(alpha)


def _record(
    obj: CompositeObjective,
    k: int,
    x: Vector,
    F: float,
    step_norm: float,
    alpha: float,
    beta: float,
    restart: bool,
    with_residual: bool,
) -> TraceRecord:
    residual = stationarity_residual(obj, x, iteration=k) if with_residual else None
    gap = feas = dual = None
    if obj.dual_gap is not None:
        info = obj.dual_gap(x)
        gap, feas, dual = info.gap, info.feas_violation, info.dual_value
    return TraceRecord(
        k=k,
        F_value=F,
        H_value=lyapunov_value(F, step_norm, alpha),
        step_norm=step_norm,
        residual=residual,
        gap=gap,
        feas_violation=feas,
        dual_value=dual,
        beta=beta,
        restart=restart,
    )


def run(
    obj: CompositeObjective,
    x0: Vector,
    schedule: BetaSchedule,
    rule: TerminationRule,
    alpha: Optional[float] = None,
    *,
    record_residual: bool = True,
    keep_iterates: bool = True,
) -> SolveResult:
    """Run the extrapolated proximal gradient method until ``rule`` fires.

    Args:
        obj: Composite objective with moduli (L, l)
        x0: Starting point in dom g
        schedule: Extrapolation schedule; its state is reset first
        rule: Bounded termination rule
        alpha: Lyapunov weight for the H column; None picks the window midpoint
        record_residual: Evaluate the stationarity residual at every iterate
        keep_iterates: Store every iterate in the trace

    Returns:
        SolveResult with the final iterate and the full trace

    Raises:
        ArgumentError: If x0 is outside dom g or the schedule/alpha are not admissible
        ConfigurationError: If the rule is unbounded or needs a hook the problem lacks
        NumericalError: If an iterate becomes non-finite; the partial trace is attached
    """
    x = validate_vector(x0, obj.dim, name="x0")
    if not in_domain(obj, x):
        raise ArgumentError("x0 is outside the domain of the nonsmooth term")
    if not rule.bounded:
        raise ConfigurationError(f"termination rule {rule!r} has no iteration cap")
    if rule.requires_gap and obj.dual_gap is None:
        raise ConfigurationError(f"problem '{obj.name}' has no dual hook for a duality-gap rule")
    with_residual = record_residual or rule.requires_residual

    L, l = obj.modulus_L, obj.modulus_l
    schedule.validate(L, l)
    schedule.reset()
    threshold = beta_threshold(L, l)
    beta_bar = schedule.beta_bar(L, l)
    admissible = beta_bar <= threshold * (1.0 + THRESHOLD_RTOL)
    threshold_strict = beta_bar < threshold
    alpha = resolve_alpha(obj, schedule, alpha)
    if not admissible:
        logger.warning(
            "%s on '%s': beta_bar=%.6g exceeds sqrt(L/(L+l))=%.6g; H is not guaranteed monotone",
            schedule.name,
            obj.name,
            beta_bar,
            threshold,
        )
    elif not threshold_strict:
        logger.warning(
            "%s on '%s': beta_bar equals sqrt(L/(L+l)); linear convergence needs strict inequality",
            schedule.name,
            obj.name,
        )
    logger.info(
        "run %s on '%s': L=%.6g l=%.6g beta_bar=%.6g alpha=%.6g rule=%r",
        schedule.name,
        obj.name,
        L,
        l,
        beta_bar,
        alpha,
        rule,
    )

    trace = IterateTrace()
    trace.append(
        _record(obj, 0, x, objective_value(obj, x), 0.0, alpha, 0.0, False, with_residual),
        x if keep_iterates else None,
    )

    x_prev = x
    restart_pending = False
    reason: Optional[TerminationReason] = None
    k = 0
    while reason is None:
        beta = schedule.next_beta(restart_pending)
        y = x + beta * (x - x_prev)
        try:
            step = forward_backward_step(obj, y, iteration=k)
            x_next = step.x_next
            if not (np.all(np.isfinite(x_next)) and np.isfinite(step.objective_at_next)):
                raise NumericalError(f"non-finite iterate at k={k + 1}", iteration=k + 1)
            if schedule.adaptive:
                restart_pending = adaptive_restart_triggered(y, x_next, x)
            record = _record(
                obj,
                k + 1,
                x_next,
                step.objective_at_next,
                float(np.linalg.norm(x_next - x)),
                alpha,
                beta,
                schedule.restarted,
                with_residual,
            )
        except NumericalError as exc:
            exc.trace = trace
            raise
        trace.append(record, x_next if keep_iterates else None)
        reason = check_termination(rule, record, x_next)
        x_prev, x = x, x_next
        k += 1

    capped = reason is TerminationReason.MAX_ITER and any(
        r is not TerminationReason.MAX_ITER for r in rule.reasons
    )
    logger.info(
        "%s on '%s' stopped after %d iterations (%s), F=%.17g",
        schedule.name,
        obj.name,
        k,
        reason.value,
        trace.last.F_value,
    )
    return SolveResult(
        x_final=x,
        iterations=k,
        termination_reason=reason,
        trace=trace,
        schedule=schedule.name,
        alpha=alpha,
        beta_bar=beta_bar,
        threshold=threshold,
        admissible=admissible,
        threshold_strict=threshold_strict,
        capped=capped,
    )
