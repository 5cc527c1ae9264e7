"""Extrapolation coefficient schedules.

A schedule produces beta_k for y^k = x^k + beta_k (x^k - x^{k-1}). The FISTA
family runs the theta recurrence

    beta_k = (theta_{k-1} - 1) / theta_k,
    theta_{k+1} = (1 + sqrt(1 + 4 theta_k^2)) / 2,

from theta_{-1} = theta_0 = 1, optionally resetting both thetas to 1 every K
iterations (fixed restart) or whenever <y^k - x^{k+1}, x^{k+1} - x^k> > 0
(adaptive restart).
"""

import logging
import math
from typing import Optional

import numpy as np

from .._exceptions import ArgumentError
from ..objective import THRESHOLD_RTOL, beta_threshold
from ..types.common import Vector

logger = logging.getLogger(__name__)


def _theta_next(theta: float) -> float:
    return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * theta * theta))


class BetaSchedule:
    """Base class for extrapolation schedules.

    Subclasses override :meth:`_coefficient`. State is reset by :meth:`reset`,
    which :func:`pgex.solver.run` calls before iterating.
    """

    name = "schedule"
    adaptive = False

    def __init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        """Return to theta_{-1} = theta_0 = 1 with no iterations since restart."""
        self.theta_prev = 1.0
        self.theta_curr = 1.0
        self.iterations_since_restart = 0
        self.restarted = False

    def validate(self, L: float, l: float) -> None:
        """Raise ArgumentError if the schedule is not allowed for moduli (L, l)."""

    def beta_bar(self, L: float, l: float) -> float:
        """Supremum of the coefficients this schedule can produce."""
        raise NotImplementedError()

    def next_beta(self, restart_signal: bool = False) -> float:
        """Return beta_k for the current iteration and advance the state."""
        raise NotImplementedError()

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class Constant(BetaSchedule):
    """beta_k = beta for every k. ``Constant(0)`` is the plain proximal gradient method."""

    def __init__(self, beta: float) -> None:
        if not (math.isfinite(beta) and beta >= 0):
            raise ArgumentError(f"beta must be finite and nonnegative, got {beta}")
        self.beta = float(beta)
        self.name = "pg" if beta == 0 else f"constant-{beta:.6g}"
        super().__init__()

    def validate(self, L: float, l: float) -> None:
        threshold = beta_threshold(L, l)
        if self.beta > threshold * (1.0 + THRESHOLD_RTOL):
            raise ArgumentError(
                f"constant beta={self.beta} exceeds sqrt(L/(L+l))={threshold:.17g}"
            )

    def beta_bar(self, L: float, l: float) -> float:
        return self.beta

    def next_beta(self, restart_signal: bool = False) -> float:
        self.iterations_since_restart += 1
        return self.beta

    def __repr__(self) -> str:
        return f"Constant(beta={self.beta!r})"


class Fista(BetaSchedule):
    """FISTA coefficients, with optional fixed-interval restart.

    Args:
        restart_interval: Reset theta every this many iterations; None disables
        heuristic: Allow use on a nonconvex smooth part (l > 0), where the
            coefficients are not covered by the convergence theory
    """

    name = "fista"

    def __init__(self, restart_interval: Optional[int] = None, *, heuristic: bool = False) -> None:
        if restart_interval == math.inf:
            restart_interval = None
        if restart_interval is not None and (
            isinstance(restart_interval, bool) or restart_interval < 1
        ):
            raise ArgumentError(
                f"restart interval must be a positive integer, got {restart_interval}"
            )
        self.restart_interval = restart_interval
        self.heuristic = heuristic
        super().__init__()

    def validate(self, L: float, l: float) -> None:
        beta_threshold(L, l)
        if l > 0 and not self.heuristic:
            raise ArgumentError(
                f"{self.name} requires a convex smooth part (l = 0), got l={l}; "
                "pass heuristic=True to run it anyway"
            )

    def beta_bar(self, L: float, l: float) -> float:
        if self.restart_interval is None:
            return 1.0
        # Coefficients increase within a restart window, so the last one is the largest.
        theta_prev, theta_curr = 1.0, 1.0
        beta = 0.0
        for _ in range(self.restart_interval):
            beta = (theta_prev - 1.0) / theta_curr
            theta_prev, theta_curr = theta_curr, _theta_next(theta_curr)
        return beta

    def next_beta(self, restart_signal: bool = False) -> float:
        expired = (
            self.restart_interval is not None
            and self.iterations_since_restart >= self.restart_interval
        )
        self.restarted = bool(restart_signal or expired)
        if self.restarted:
            logger.debug(
                "theta reset after %d iterations (%s)",
                self.iterations_since_restart,
                "adaptive" if restart_signal else "fixed",
            )
            self.theta_prev = 1.0
            self.theta_curr = 1.0
            self.iterations_since_restart = 0
        beta = (self.theta_prev - 1.0) / self.theta_curr
        self.theta_prev, self.theta_curr = self.theta_curr, _theta_next(self.theta_curr)
        self.iterations_since_restart += 1
        return beta

    def __repr__(self) -> str:
        return f"{type(self).__name__}(restart_interval={self.restart_interval!r})"


class FistaFixedRestart(Fista):
    """FISTA with theta reset every K iterations."""

    name = "fista-fixed"

    def __init__(self, K: Optional[int], *, heuristic: bool = False) -> None:
        super().__init__(K, heuristic=heuristic)


class FistaAdaptiveRestart(Fista):
    """FISTA with theta reset whenever the gradient restart test fires."""

    name = "fista-adaptive"
    adaptive = True

    def __init__(self, *, heuristic: bool = False) -> None:
        super().__init__(None, heuristic=heuristic)


class FistaBothRestarts(Fista):
    """FISTA with both fixed-interval and adaptive restarts; either one resets the counter."""

    name = "fista-both"
    adaptive = True

    def __init__(self, K: int, *, heuristic: bool = False) -> None:
        super().__init__(K, heuristic=heuristic)


def next_beta(schedule: BetaSchedule, restart_signal: bool = False) -> float:
    """Return beta_k from ``schedule`` and advance its state."""
    return schedule.next_beta(restart_signal)


def adaptive_restart_triggered(y_prev: Vector, x_next: Vector, x_curr: Vector) -> bool:
    """True iff <y^k - x^{k+1}, x^{k+1} - x^k> > 0 (strictly)."""
    return bool(np.dot(y_prev - x_next, x_next - x_curr) > 0.0)
