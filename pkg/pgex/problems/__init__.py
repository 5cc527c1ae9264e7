"""Problem families: LASSO, l1-logistic regression and the simplex-constrained QP.

``FAMILIES`` maps each family to its generator, objective constructor, default
stopping rule, starting point and default schedules.
"""

from typing import Callable, Dict, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..objective import CompositeObjective
from ..solver.termination import DualityGap, MaxIter, SuccessiveChange, TerminationRule
from ..types.common import Family, Vector
from ..types.experiment import ExperimentConfig, ScheduleSpec
from ._random import GENERATOR_VERSION, derive_seed, make_rng
from .io import ProblemInstance, load_instance, save_instance
from .lasso import gen_lasso, lasso_dual, lasso_gap, lasso_objective
from .logistic import gen_logistic, logistic_dual, logistic_gap, logistic_objective
from .qp import gen_qp, qp_moduli, qp_objective, qp_start


class ProblemFamily(BaseModel):
    """Everything an experiment needs to know about one family."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: Family
    generate: Callable[[ExperimentConfig, int], ProblemInstance]
    objective: Callable[[ProblemInstance], CompositeObjective]
    default_rule: Callable[[float, int], TerminationRule]
    start: Callable[[ProblemInstance], Vector]
    default_schedules: Tuple[ScheduleSpec, ...]


def _gap_rule(tol: float, max_iter: int) -> TerminationRule:
    return DualityGap(tol) | MaxIter(max_iter)


def _change_rule(tol: float, max_iter: int) -> TerminationRule:
    return SuccessiveChange(tol) | MaxIter(max_iter)


_CONVEX_SCHEDULES = (
    ScheduleSpec(kind="none"),
    ScheduleSpec(kind="fista"),
    ScheduleSpec(kind="fista-both"),
)

FAMILIES: Dict[Family, ProblemFamily] = {
    Family.LASSO: ProblemFamily(
        family=Family.LASSO,
        generate=lambda cfg, seed: gen_lasso(cfg.m, cfg.n, cfg.s_sparsity, seed, lam=cfg.lam),
        objective=lasso_objective,
        default_rule=_gap_rule,
        start=lambda inst: np.zeros(inst.A.shape[1]),
        default_schedules=_CONVEX_SCHEDULES,
    ),
    Family.LOGISTIC: ProblemFamily(
        family=Family.LOGISTIC,
        generate=lambda cfg, seed: gen_logistic(cfg.m, cfg.n, cfg.s_sparsity, seed, lam=cfg.lam),
        objective=logistic_objective,
        default_rule=_gap_rule,
        start=lambda inst: np.zeros(inst.A.shape[1] + 1),
        default_schedules=_CONVEX_SCHEDULES,
    ),
    Family.QP: ProblemFamily(
        family=Family.QP,
        generate=lambda cfg, seed: gen_qp(cfg.n, seed, s=cfg.simplex_s),
        objective=qp_objective,
        default_rule=_change_rule,
        start=qp_start,
        default_schedules=(
            ScheduleSpec(kind="constant-frac", param=0.98),
            ScheduleSpec(kind="fista"),
            ScheduleSpec(kind="none"),
        ),
    ),
}

__all__ = [
    "FAMILIES",
    "ProblemFamily",
    "ProblemInstance",
    # Generators
    "GENERATOR_VERSION",
    "derive_seed",
    "make_rng",
    "gen_lasso",
    "gen_logistic",
    "gen_qp",
    # Objectives and duals
    "lasso_objective",
    "lasso_gap",
    "lasso_dual",
    "logistic_objective",
    "logistic_gap",
    "logistic_dual",
    "qp_objective",
    "qp_moduli",
    "qp_start",
    # Serialization
    "save_instance",
    "load_instance",
]
