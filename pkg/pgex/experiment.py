"""Experiment harness: configuration layering, single-instance runs and the QP batch table.

Files written to ``config.output_dir``:

- ``<family>_<schedule>_trace.csv``: one row per iterate
- ``manifest.txt``: config echo, moduli, threshold and per-run outcome as key=value
- ``rates.csv``: linear-rate fits of ||x^k - x*|| and |F(x^k) - F_min| per schedule
- ``table1_runs.csv`` / ``table1_summary.csv``: batch mode rows and per-algorithm means
"""

import csv
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, get_args

from pydantic import ValidationError

from ._exceptions import ConfigurationError, InsufficientDataError, NumericalError, PgexError
from ._utils import format_float, get_workers_from_env
from .diagnostics import audit_run, distance_to_reference, fit_linear_rate, objective_gap_series
from .objective import CompositeObjective, beta_threshold
from .problems import FAMILIES, GENERATOR_VERSION, ProblemInstance, derive_seed, save_instance
from .problems.io import load_instance
from .solver import (
    BetaSchedule,
    Constant,
    Fista,
    FistaAdaptiveRestart,
    FistaBothRestarts,
    FistaFixedRestart,
    run,
)
from .types.common import Family
from .types.diagnostics import RateFit
from .types.experiment import (
    AlgorithmSummary,
    BatchSummary,
    ExperimentConfig,
    ExperimentReport,
    RunSummary,
    ScheduleKind,
    ScheduleSpec,
)
from .types.solver import IterateTrace, SolveResult

logger = logging.getLogger(__name__)

TRACE_COLUMNS = (
    "k",
    "F",
    "H",
    "step_norm",
    "residual",
    "gap",
    "feas_violation",
    "beta",
    "restart_flag",
)
RATE_COLUMNS = (
    "schedule",
    "series",
    "status",
    "ratio_estimate",
    "slope",
    "intercept",
    "r_squared",
    "tail_start",
    "points",
    "clamped",
)
RUN_COLUMNS = (
    "instance",
    "seed",
    "schedule",
    "iterations",
    "termination",
    "fval",
    "capped",
    "error",
)
SUMMARY_COLUMNS = ("schedule", "completed", "failed", "mean_iter", "mean_fval")

SCHEDULE_KINDS = get_args(ScheduleKind)

# Dimension sets per preset: convex families use (m, n, s_sparsity), the QP uses n.
PRESETS: Dict[str, Dict[Family, Dict[str, Any]]] = {
    "desk": {
        Family.LASSO: {"m": 50, "n": 500, "s_sparsity": 5},
        Family.LOGISTIC: {"m": 50, "n": 500, "s_sparsity": 5},
        Family.QP: {"n": 200, "instances": 10},
    },
    "full": {
        Family.LASSO: {"m": 300, "n": 3000, "s_sparsity": 30},
        Family.LOGISTIC: {"m": 300, "n": 3000, "s_sparsity": 30},
        Family.QP: {"n": 2000, "instances": 50},
    },
}


def parse_schedule_tokens(tokens: Sequence[str]) -> List[ScheduleSpec]:
    """Parse e.g. ``["constant-frac", "0.98", "fista", "none"]`` into schedule specs.

    A schedule name may be followed by one numeric parameter.

    Raises:
        ConfigurationError: On an unknown name or a misplaced number
    """
    specs: List[ScheduleSpec] = []
    i = 0
    while i < len(tokens):
        kind = tokens[i].strip().lower()
        if kind not in SCHEDULE_KINDS:
            raise ConfigurationError(
                f"unknown schedule '{tokens[i]}'; expected one of {', '.join(SCHEDULE_KINDS)}"
            )
        param = None
        if i + 1 < len(tokens):
            try:
                param = float(tokens[i + 1])
            except ValueError:
                param = None
            else:
                i += 1
        try:
            specs.append(ScheduleSpec(kind=kind, param=param))
        except ValidationError as exc:
            raise ConfigurationError(_first_error(exc)) from exc
        i += 1
    return specs


def read_config_file(path: Path) -> Dict[str, Any]:
    """Read ``key=value`` lines; blank lines and ``#`` comments are skipped.

    Raises:
        ConfigurationError: If the file cannot be read or a line is not key=value
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    values: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = key.strip().replace("-", "_"), value.strip()
        if key in ("schedule", "schedules"):
            values["schedules"] = parse_schedule_tokens(value.replace(",", " ").split())
        else:
            values[key] = value
    return values


def _first_error(exc: ValidationError) -> str:
    err = exc.errors()[0]
    where = ".".join(str(part) for part in err.get("loc", ()))
    return f"{where}: {err['msg']}" if where else err["msg"]


# Config-file spellings of fields, e.g. lambda=3 for lam.
_FIELD_ALIASES = {
    field.alias: name for name, field in ExperimentConfig.model_fields.items() if field.alias
}


def _canonical(values: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    return {_FIELD_ALIASES.get(k, k): v for k, v in (values or {}).items()}


def build_config(
    file_values: Optional[Dict[str, Any]] = None, cli_values: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """Layer model defaults < preset < config file < command-line values.

    Raises:
        ConfigurationError: If the merged values do not form a valid config
    """
    overrides = {k: v for k, v in _canonical(cli_values).items() if v is not None}
    merged = {**_canonical(file_values), **overrides}
    preset = merged.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(f"unknown preset '{preset}'; expected desk or full")
        name = merged.get("family", Family.LASSO)
        try:
            family = name if isinstance(name, Family) else Family(str(name).lower())
        except ValueError as exc:
            raise ConfigurationError(f"unknown family '{name}'") from exc
        merged = {**PRESETS[preset][family], **merged}
    try:
        return ExperimentConfig(**merged)
    except ValidationError as exc:
        raise ConfigurationError(f"invalid configuration: {_first_error(exc)}") from exc


def build_schedule(spec: ScheduleSpec, obj: CompositeObjective, K: int) -> BetaSchedule:
    """Instantiate a schedule for ``obj``.

    FISTA variants on a nonconvex smooth part (l > 0) run as heuristics.
    """
    heuristic = obj.modulus_l > 0
    interval = int(spec.param) if spec.param is not None else K
    if spec.kind == "none":
        return Constant(0.0)
    if spec.kind == "constant":
        return Constant(spec.param)
    if spec.kind == "constant-frac":
        return Constant(spec.param * beta_threshold(obj.modulus_L, obj.modulus_l))
    if heuristic:
        logger.warning("running %s on nonconvex '%s' as a heuristic", spec.kind, obj.name)
    if spec.kind == "fista":
        return Fista(heuristic=heuristic)
    if spec.kind == "fista-fixed":
        return FistaFixedRestart(interval, heuristic=heuristic)
    if spec.kind == "fista-adaptive":
        return FistaAdaptiveRestart(heuristic=heuristic)
    return FistaBothRestarts(interval, heuristic=heuristic)


def _schedules(config: ExperimentConfig) -> List[ScheduleSpec]:
    return list(config.schedules) or list(FAMILIES[config.family].default_schedules)


def write_trace_csv(trace: IterateTrace, path: Path) -> Path:
    """Write one row per record with floats at 17 significant digits."""
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for r in trace.records:
            writer.writerow(
                [
                    r.k,
                    format_float(r.F_value),
                    format_float(r.H_value),
                    format_float(r.step_norm),
                    format_float(r.residual),
                    format_float(r.gap),
                    format_float(r.feas_violation),
                    format_float(r.beta),
                    int(r.restart),
                ]
            )
    return path


def _rate_row(label: str, series_name: str, series: Iterable[float]) -> List[str]:
    try:
        fit: RateFit = fit_linear_rate(list(series))
    except InsufficientDataError as exc:
        logger.info("no rate fit for %s %s: %s", label, series_name, exc.message)
        return [label, series_name, "insufficient"] + [""] * (len(RATE_COLUMNS) - 3)
    return [
        label,
        series_name,
        "ok",
        format_float(fit.ratio_estimate),
        format_float(fit.slope),
        format_float(fit.intercept),
        format_float(fit.r_squared),
        str(fit.tail_start),
        str(fit.points),
        str(int(fit.clamped)),
    ]


def _config_lines(config: ExperimentConfig) -> List[Tuple[str, str]]:
    lines = []
    for key, value in config.model_dump(mode="json").items():
        if key == "schedules":
            value = " ".join(
                spec.kind if spec.param is None else f"{spec.kind} {spec.param:g}"
                for spec in _schedules(config)
            )
        lines.append((key, "" if value is None else str(value)))
    return lines


def _write_manifest(path: Path, entries: Sequence[Tuple[str, str]]) -> Path:
    with path.open("w", encoding="utf-8") as fh:
        for key, value in entries:
            fh.write(f"{key}={value}\n")
    return path


def _load_or_generate(config: ExperimentConfig) -> ProblemInstance:
    if config.instance_path is not None:
        inst = load_instance(config.instance_path)
        if inst.family is not config.family:
            raise ConfigurationError(
                f"instance file holds a {inst.family.value} instance, config asks for "
                f"{config.family.value}"
            )
        return inst
    return FAMILIES[config.family].generate(config, config.seed)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every configured schedule on one instance and write traces, manifest and rates.

    Args:
        config: Validated experiment configuration

    Returns:
        ExperimentReport listing the runs and written files

    Raises:
        ConfigurationError: If the config or replayed instance is inconsistent
        NumericalError: If a run diverges; its partial trace and the manifest are
            written before the error propagates
    """
    family = FAMILIES[config.family]
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    inst = _load_or_generate(config)
    files: List[Path] = []
    if config.save_instance:
        files.append(save_instance(inst, out / "instance.txt"))
    obj = family.objective(inst)
    x0 = family.start(inst)
    rule = family.default_rule(config.tol, config.max_iter)
    L, l = obj.modulus_L, obj.modulus_l

    manifest: List[Tuple[str, str]] = _config_lines(config)
    manifest += [
        ("generator", GENERATOR_VERSION),
        ("instance_seed", str(inst.seed)),
        ("L", format_float(L)),
        ("l", format_float(l)),
        ("threshold", format_float(beta_threshold(L, l))),
    ]

    runs: List[RunSummary] = []
    results: List[Tuple[str, SolveResult]] = []
    for spec in _schedules(config):
        label = spec.label(config.K)
        schedule = build_schedule(spec, obj, config.K)
        trace_path = out / f"{config.family.value}_{label}_trace.csv"
        try:
            result = run(obj, x0, schedule, rule, config.alpha)
        except NumericalError as exc:
            if isinstance(exc.trace, IterateTrace):
                files.append(write_trace_csv(exc.trace, trace_path))
            manifest.append((f"run.{label}.error", exc.message))
            files.append(_write_manifest(out / "manifest.txt", manifest))
            raise
        files.append(write_trace_csv(result.trace, trace_path))
        results.append((label, result))
        audits = audit_run(result, L, l)
        if not audits:
            audit = "skipped"
        else:
            audit = "passed" if all(a.passed for a in audits) else "failed"
        manifest += [
            (f"run.{label}.iterations", str(result.iterations)),
            (f"run.{label}.termination", result.termination_reason.value),
            (f"run.{label}.final_objective", format_float(result.final_objective)),
            (f"run.{label}.alpha", format_float(result.alpha)),
            (f"run.{label}.beta_bar", format_float(result.beta_bar)),
            (f"run.{label}.threshold_strict", str(result.threshold_strict).lower()),
            (f"run.{label}.audit", audit),
        ]
        runs.append(
            RunSummary(
                schedule=label,
                seed=inst.seed,
                iterations=result.iterations,
                termination_reason=result.termination_reason.value,
                final_objective=result.final_objective,
                capped=result.capped,
                admissible=result.admissible,
            )
        )

    F_min = min(result.final_objective for _, result in results)
    manifest.append(("F_min", format_float(F_min)))
    rates_path = out / "rates.csv"
    with rates_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RATE_COLUMNS)
        for label, result in results:
            writer.writerow(
                _rate_row(label, "distance", distance_to_reference(result.trace, result.x_final))
            )
            writer.writerow(
                _rate_row(label, "objective_gap", objective_gap_series(result.trace, F_min))
            )
    files.append(rates_path)
    files.append(_write_manifest(out / "manifest.txt", manifest))
    logger.info("experiment on %s finished; %d files in %s", config.family.value, len(files), out)
    return ExperimentReport(runs=runs, files=files)


def _solve_instance(
    config: ExperimentConfig, index: int, inst: ProblemInstance, specs: Sequence[ScheduleSpec]
) -> List[RunSummary]:
    family = FAMILIES[config.family]
    summaries = []
    try:
        obj = family.objective(inst)
    except PgexError as exc:
        return [
            RunSummary(
                schedule=spec.label(config.K), instance=index, seed=inst.seed, error=str(exc)
            )
            for spec in specs
        ]
    x0 = family.start(inst)
    for spec in specs:
        label = spec.label(config.K)
        try:
            result = run(
                obj,
                x0,
                build_schedule(spec, obj, config.K),
                family.default_rule(config.tol, config.max_iter),
                config.alpha,
                record_residual=False,
                keep_iterates=False,
            )
        except PgexError as exc:
            logger.warning("instance %d, %s failed: %s", index, label, exc.message)
            summaries.append(
                RunSummary(schedule=label, instance=index, seed=inst.seed, error=exc.message)
            )
            continue
        summaries.append(
            RunSummary(
                schedule=label,
                instance=index,
                seed=inst.seed,
                iterations=result.iterations,
                termination_reason=result.termination_reason.value,
                final_objective=result.final_objective,
                capped=result.capped,
                admissible=result.admissible,
            )
        )
    return summaries


def summarize(family: Family, instances: int, runs: Sequence[RunSummary]) -> BatchSummary:
    """Per-schedule means over completed runs, in first-seen schedule order."""
    order: List[str] = []
    for r in runs:
        if r.schedule not in order:
            order.append(r.schedule)
    algorithms = []
    for label in order:
        done = [r for r in runs if r.schedule == label and r.completed]
        failed = sum(1 for r in runs if r.schedule == label and not r.completed)
        algorithms.append(
            AlgorithmSummary(
                schedule=label,
                completed=len(done),
                failed=failed,
                mean_iterations=sum(r.iterations for r in done) / len(done) if done else None,
                mean_objective=sum(r.final_objective for r in done) / len(done) if done else None,
            )
        )
    return BatchSummary(family=family, instances=instances, runs=list(runs), algorithms=algorithms)


def run_table1(
    config: ExperimentConfig, instances: Optional[Sequence[ProblemInstance]] = None
) -> BatchSummary:
    """Run every schedule on a batch of QP instances and write the run and summary tables.

    Instance ``i`` is drawn with seed ``derive_seed(config.seed, i)`` unless
    ``instances`` are supplied. Runs execute on a bounded thread pool; all files
    are written afterwards by the calling thread.

    Raises:
        ConfigurationError: If the family is not qp
    """
    if config.family is not Family.QP:
        raise ConfigurationError(f"batch mode runs the qp family, got {config.family.value}")
    specs = _schedules(config)
    if instances is None:
        family = FAMILIES[config.family]
        instances = [
            family.generate(config, derive_seed(config.seed, i)) for i in range(config.instances)
        ]
    workers = config.workers or get_workers_from_env() or min(4, os.cpu_count() or 1)
    logger.info("batch of %d instances on %d workers", len(instances), workers)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_instance = list(
            pool.map(
                lambda item: _solve_instance(config, item[0], item[1], specs),
                enumerate(instances),
            )
        )
    runs = [summary for batch in per_instance for summary in batch]
    summary = summarize(config.family, len(instances), runs)

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "table1_runs.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_COLUMNS)
        for r in runs:
            writer.writerow(
                [
                    r.instance,
                    r.seed,
                    r.schedule,
                    "" if r.iterations is None else r.iterations,
                    r.termination_reason or "",
                    format_float(r.final_objective),
                    int(r.capped),
                    r.error or "",
                ]
            )
    with (out / "table1_summary.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for a in summary.algorithms:
            writer.writerow(
                [
                    a.schedule,
                    a.completed,
                    a.failed,
                    format_float(a.mean_iterations),
                    format_float(a.mean_objective),
                ]
            )
    if summary.failures:
        logger.warning("%d runs failed; see table1_runs.csv", len(summary.failures))
    return summary
