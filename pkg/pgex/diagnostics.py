"""Lyapunov sequences, invariant audits and empirical rate estimation over run traces.

Trace indexing follows the solver: record k describes x^k, ``step_norm[k]`` is
||x^k - x^{k-1}|| and ``beta[k]`` is the coefficient used to produce x^k.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ._exceptions import ArgumentError, InsufficientDataError
from .objective import THRESHOLD_RTOL, alpha_window, beta_threshold
from .types.common import Vector
from .types.diagnostics import AuditReport, RateFit
from .types.solver import IterateTrace, SolveResult

logger = logging.getLogger(__name__)

MONOTONE_RTOL = 1e-10
DECREASE_RTOL = 1e-8
MIN_FIT_POINTS = 10
CLAMP_FLOOR = 1e-300


def lyapunov_value(F_x: float, step_norm: float, alpha: float) -> float:
    """H = F(x^k) + alpha * ||x^k - x^{k-1}||^2.

    Raises:
        ArgumentError: If ``alpha < 0``
    """
    if alpha < 0:
        raise ArgumentError(f"alpha must be nonnegative, got {alpha}")
    return F_x + alpha * step_norm**2


def lyapunov_series(trace: IterateTrace, alpha: float) -> Vector:
    """Recompute the H column of a trace at another weight ``alpha``."""
    return np.array(
        [lyapunov_value(r.F_value, r.step_norm, alpha) for r in trace.records], dtype=np.float64
    )


def audit_monotone(
    series: Sequence[float], rel_tol: float = MONOTONE_RTOL
) -> Tuple[bool, Optional[int]]:
    """Check s[k+1] <= s[k] + rel_tol * max(1, |s[k]|) for every k.

    Returns:
        (True, None) when the series is nonincreasing within tolerance, otherwise
        (False, k) for the first k whose successor increases

    Raises:
        ArgumentError: If the series is empty or ``rel_tol < 0``
    """
    s = np.asarray(series, dtype=np.float64)
    if s.size == 0:
        raise ArgumentError("cannot audit an empty series")
    if rel_tol < 0:
        raise ArgumentError(f"rel_tol must be nonnegative, got {rel_tol}")
    slack = rel_tol * np.maximum(1.0, np.abs(s[:-1]))
    bad = np.nonzero(s[1:] > s[:-1] + slack)[0]
    if bad.size:
        return False, int(bad[0])
    return True, None


def audit_lyapunov_decrease(
    trace: IterateTrace, L: float, l: float, alpha: float, rel_tol: float = DECREASE_RTOL
) -> List[int]:
    """Indices k where the per-iteration bound on H[k+1] - H[k] fails.

    The bound is (alpha - L/2) s[k+1]^2 + ((L + l)/2 beta[k+1]^2 - alpha) s[k]^2,
    with an absolute slack of rel_tol * max(1, |H[k]|).
    """
    H = lyapunov_series(trace, alpha)
    s = trace.column("step_norm")
    beta = trace.column("beta")
    bound = (alpha - 0.5 * L) * s[1:] ** 2 + (0.5 * (L + l) * beta[1:] ** 2 - alpha) * s[:-1] ** 2
    slack = rel_tol * np.maximum(1.0, np.abs(H[:-1]))
    return [int(k) for k in np.nonzero(H[1:] - H[:-1] > bound + slack)[0]]


def audit_descent(
    trace: IterateTrace, L: float, l: float, rel_tol: float = DECREASE_RTOL
) -> List[int]:
    """Indices k where F[k+1] <= F[k] + (L + l)/2 (beta[k+1] s[k])^2 - L/2 s[k+1]^2 fails."""
    F = trace.column("F_value")
    s = trace.column("step_norm")
    beta = trace.column("beta")
    bound = F[:-1] + 0.5 * (L + l) * (beta[1:] * s[:-1]) ** 2 - 0.5 * L * s[1:] ** 2
    slack = rel_tol * np.maximum(1.0, np.abs(F[:-1]))
    return [int(k) for k in np.nonzero(F[1:] > bound + slack)[0]]


def audit_square_summability(trace: IterateTrace) -> bool:
    """Squared steps sum to a finite value and the last decile of steps is below the first.

    Raises:
        InsufficientDataError: If the run has fewer than 10 completed iterations
    """
    s = trace.column("step_norm")[1:]
    if s.size < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"square-summability audit needs {MIN_FIT_POINTS} steps, got {s.size}"
        )
    if not np.isfinite(np.sum(s**2)):
        return False
    decile = max(1, s.size // 10)
    return bool(s[-decile:].mean() < s[:decile].mean())


def objective_gap_series(trace: IterateTrace, F_min: float) -> Vector:
    """|F(x^k) - F_min| per record."""
    return np.abs(trace.column("F_value") - F_min)


def distance_to_reference(
    iterates: Union[IterateTrace, Sequence[Vector]], x_ref: Vector
) -> Vector:
    """||x^k - x_ref|| per stored iterate.

    Raises:
        ArgumentError: If an iterate's length differs from ``x_ref``
    """
    if isinstance(iterates, IterateTrace):
        iterates = iterates.iterates
    x_ref = np.asarray(x_ref, dtype=np.float64)
    out = np.empty(len(iterates), dtype=np.float64)
    for k, x in enumerate(iterates):
        if x.shape != x_ref.shape:
            raise ArgumentError(f"iterate {k} has shape {x.shape}, reference {x_ref.shape}")
        out[k] = np.linalg.norm(x - x_ref)
    return out


def fit_linear_rate(residuals: Sequence[float], tail_fraction: float = 0.5) -> RateFit:
    """Fit log(residual_k) = intercept + slope * k over the tail of a residual series.

    The series is cut before its first exact zero. Positive entries at or below
    1e-300 are clamped to 1e-300 and the fit is flagged as clamped.

    Args:
        residuals: Nonnegative residuals indexed by iteration
        tail_fraction: Fraction of the (cut) series fitted, counted from the end

    Returns:
        RateFit with ratio_estimate = exp(slope)

    Raises:
        ArgumentError: If ``tail_fraction`` is outside (0, 1] or an entry is negative
            or non-finite
        InsufficientDataError: If the tail has fewer than 10 points
    """
    if not 0 < tail_fraction <= 1:
        raise ArgumentError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    r = np.asarray(residuals, dtype=np.float64)
    if r.ndim != 1 or not np.all(np.isfinite(r)) or np.any(r < 0):
        raise ArgumentError("residuals must be a finite nonnegative sequence")

    zeros = np.nonzero(r == 0.0)[0]
    if zeros.size:
        r = r[: zeros[0]]
    clamped = bool(np.any(r <= CLAMP_FLOOR))
    r = np.maximum(r, CLAMP_FLOOR)

    n = r.size
    points = math.ceil(tail_fraction * n)
    if points < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"rate fit needs at least {MIN_FIT_POINTS} tail points, got {points}"
        )
    tail_start = n - points
    log_r = np.log(r[tail_start:])
    local_k = np.arange(points, dtype=np.float64)
    slope, local_intercept = np.polyfit(local_k, log_r, 1)

    fitted = local_intercept + slope * local_k
    ss_res = float(np.sum((log_r - fitted) ** 2))
    ss_tot = float(np.sum((log_r - log_r.mean()) ** 2))
    # Round-off floor: a numerically constant series is an exact fit.
    flat = np.finfo(np.float64).eps * points * max(1.0, float(np.max(log_r**2)))
    r_squared = 1.0 if ss_tot <= flat else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    if clamped:
        logger.debug("rate fit clamped residuals at %g", CLAMP_FLOOR)
    return RateFit(
        ratio_estimate=float(np.exp(slope)),
        slope=float(slope),
        intercept=float(local_intercept - slope * tail_start),
        r_squared=r_squared,
        tail_start=tail_start,
        points=points,
        clamped=clamped,
    )


def audit_run(
    result: SolveResult,
    L: float,
    l: float,
    alphas: Optional[Sequence[float]] = None,
) -> List[AuditReport]:
    """Audit H-monotonicity, the H-decrease bound and the descent bound of a run.

    Args:
        result: Completed solver run
        L: Smooth-part modulus the run used
        l: Concavity modulus the run used
        alphas: Lyapunov weights to audit; defaults to both endpoints and the
            midpoint of the admissible window

    Returns:
        One AuditReport per alpha. Empty for default alphas when the run's
        schedule lies outside the admissible range, where no window exists.
    """
    if alphas is None:
        if result.beta_bar > beta_threshold(L, l) * (1.0 + THRESHOLD_RTOL):
            logger.info("%s run is outside the admissible range; no H audit", result.schedule)
            return []
        lower, upper = alpha_window(L, l, result.beta_bar)
        alphas = (lower, 0.5 * (lower + upper), upper)

    descent = audit_descent(result.trace, L, l)
    reports = []
    for alpha in alphas:
        monotone, first = audit_monotone(lyapunov_series(result.trace, alpha))
        reports.append(
            AuditReport(
                alpha=alpha,
                monotone=monotone,
                first_violation=first,
                decrease_violations=audit_lyapunov_decrease(result.trace, L, l, alpha),
                descent_violations=descent,
            )
        )
        if not reports[-1].passed:
            logger.warning(
                "%s audit failed at alpha=%.6g (first H increase at %s)",
                result.schedule,
                alpha,
                first,
            )
    return reports
