"""pgex - proximal gradient methods with extrapolation.

This package solves composite problems min f(x) + g(x) with the extrapolated
proximal gradient method, FISTA and its fixed/adaptive restart variants, and
ships the LASSO, l1-logistic and simplex-constrained QP families together with
diagnostics for Lyapunov monotonicity and linear-rate estimation.

Example:
    ```python
    from pgex import DualityGap, FistaBothRestarts, MaxIter, gen_lasso, lasso_objective, run

    inst = gen_lasso(m=50, n=500, s_sparsity=5, seed=0)
    obj = lasso_objective(inst)
    result = run(obj, [0.0] * 500, FistaBothRestarts(500), DualityGap(1e-6) | MaxIter(5000))
    print(result.iterations, result.termination_reason)
    ```
"""

from ._exceptions import (
    ArgumentError,
    ConfigurationError,
    ConvergenceError,
    InsufficientDataError,
    NumericalError,
    PgexError,
)
from .diagnostics import (
    audit_descent,
    audit_lyapunov_decrease,
    audit_monotone,
    audit_run,
    audit_square_summability,
    distance_to_reference,
    fit_linear_rate,
    lyapunov_series,
    lyapunov_value,
    objective_gap_series,
)
from .experiment import build_config, run_experiment, run_table1
from .linalg import gram_spectral_norm, mat_vec, sym_extreme_eigs
from .objective import (
    CompositeObjective,
    alpha_window,
    beta_threshold,
    forward_backward_step,
    stationarity_residual,
)
from .problems import (
    FAMILIES,
    gen_lasso,
    gen_logistic,
    gen_qp,
    lasso_gap,
    lasso_objective,
    load_instance,
    logistic_gap,
    logistic_objective,
    qp_objective,
    qp_start,
    save_instance,
)
from .proxops import project_simplex, soft_threshold
from .solver import (
    AllOf,
    AnyOf,
    BetaSchedule,
    Constant,
    DualityGap,
    Fista,
    FistaAdaptiveRestart,
    FistaBothRestarts,
    FistaFixedRestart,
    MaxIter,
    Residual,
    SuccessiveChange,
    TerminationRule,
    adaptive_restart_triggered,
    check_termination,
    next_beta,
    run,
)
from .types import (
    BatchSummary,
    EigenEstimate,
    ExperimentConfig,
    Family,
    IterateTrace,
    LassoInstance,
    LogisticInstance,
    RateFit,
    SimplexQpInstance,
    SolveResult,
    TerminationReason,
)
from .version import __version__

__all__ = [
    # Version
    "__version__",
    # Exceptions
    "PgexError",
    "ArgumentError",
    "ConvergenceError",
    "NumericalError",
    "ConfigurationError",
    "InsufficientDataError",
    # Linear algebra and prox
    "mat_vec",
    "gram_spectral_norm",
    "sym_extreme_eigs",
    "soft_threshold",
    "project_simplex",
    # Objective
    "CompositeObjective",
    "forward_backward_step",
    "stationarity_residual",
    "beta_threshold",
    "alpha_window",
    # Solver
    "run",
    "next_beta",
    "adaptive_restart_triggered",
    "check_termination",
    "BetaSchedule",
    "Constant",
    "Fista",
    "FistaFixedRestart",
    "FistaAdaptiveRestart",
    "FistaBothRestarts",
    "TerminationRule",
    "MaxIter",
    "SuccessiveChange",
    "DualityGap",
    "Residual",
    "AnyOf",
    "AllOf",
    # Diagnostics
    "lyapunov_value",
    "lyapunov_series",
    "audit_monotone",
    "audit_lyapunov_decrease",
    "audit_descent",
    "audit_square_summability",
    "audit_run",
    "fit_linear_rate",
    "distance_to_reference",
    "objective_gap_series",
    # Problems
    "FAMILIES",
    "gen_lasso",
    "gen_logistic",
    "gen_qp",
    "lasso_objective",
    "lasso_gap",
    "logistic_objective",
    "logistic_gap",
    "qp_objective",
    "qp_start",
    "save_instance",
    "load_instance",
    # Experiments
    "build_config",
    "run_experiment",
    "run_table1",
    # Types
    "Family",
    "TerminationReason",
    "EigenEstimate",
    "LassoInstance",
    "LogisticInstance",
    "SimplexQpInstance",
    "IterateTrace",
    "SolveResult",
    "RateFit",
    "ExperimentConfig",
    "BatchSummary",
]
