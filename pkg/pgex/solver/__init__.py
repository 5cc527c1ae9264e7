"""Extrapolated proximal gradient solver, schedules and termination rules."""

from .algorithm import resolve_alpha, run
from .schedules import (
    BetaSchedule,
    Constant,
    Fista,
    FistaAdaptiveRestart,
    FistaBothRestarts,
    FistaFixedRestart,
    adaptive_restart_triggered,
    next_beta,
)
from .termination import (
    AllOf,
    AnyOf,
    DualityGap,
    MaxIter,
    Residual,
    SuccessiveChange,
    TerminationRule,
    check_termination,
)

__all__ = [
    # Main loop
    "run",
    "resolve_alpha",
    # Schedules
    "BetaSchedule",
    "Constant",
    "Fista",
    "FistaFixedRestart",
    "FistaAdaptiveRestart",
    "FistaBothRestarts",
    "next_beta",
    "adaptive_restart_triggered",
    # Termination
    "TerminationRule",
    "MaxIter",
    "SuccessiveChange",
    "DualityGap",
    "Residual",
    "AnyOf",
    "AllOf",
    "check_termination",
]
