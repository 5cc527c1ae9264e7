"""Command-line experiment runner.

Examples:
    ```bash
    # Three default algorithms on a desk-scale LASSO instance
    pgex run --family lasso --preset desk

    # Extrapolation at 98% of the threshold on the nonconvex QP
    pgex run --family qp --schedule constant-frac 0.98

    # Batch comparison of PG_e, FISTA and PG on 10 QP instances
    pgex table1 --preset desk --output-dir out/table1
    ```

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure,
4 iteration cap reached before the family's stopping test was satisfied.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from . import __version__
from ._exceptions import ArgumentError, ConfigurationError, ConvergenceError, NumericalError
from ._utils import LOG_LEVELS, configure_logging, get_log_level_from_env, get_output_dir_from_env
from .experiment import (
    build_config,
    parse_schedule_tokens,
    read_config_file,
    run_experiment,
    run_table1,
)
from .types.experiment import ExperimentConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_CAPPED = 4

# argparse dest -> ExperimentConfig field
_CONFIG_FLAGS = (
    "family",
    "preset",
    "m",
    "n",
    "s_sparsity",
    "lam",
    "simplex_s",
    "K",
    "tol",
    "max_iter",
    "alpha",
    "seed",
    "instances",
    "workers",
    "output_dir",
    "instance_path",
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--family", choices=["lasso", "logistic", "qp"], help="Problem family")
    p.add_argument("--preset", choices=["desk", "full"], help="Dimension preset")
    p.add_argument("--m", type=int, help="Rows of A (convex families)")
    p.add_argument("--n", type=int, help="Columns of A, or QP dimension")
    p.add_argument("--s-sparsity", type=int, dest="s_sparsity", help="Nonzeros of x_true")
    p.add_argument("--lambda", type=float, dest="lam", help="Regularization weight (default 5)")
    p.add_argument("--simplex-s", type=float, dest="simplex_s", help="Fixed QP simplex scale")
    p.add_argument(
        "--schedule",
        nargs="+",
        metavar="TOKEN",
        help="Schedules, each optionally followed by a number: none, constant B, "
        "constant-frac PHI, fista, fista-fixed [K], fista-adaptive, fista-both [K]",
    )
    p.add_argument("--K", type=int, help="Fixed restart interval (default 500)")
    p.add_argument("--tol", type=float, help="Stopping tolerance (default 1e-6)")
    p.add_argument("--max-iter", type=int, dest="max_iter", help="Iteration cap (default 5000)")
    p.add_argument("--alpha", type=float, help="Lyapunov weight (default: window midpoint)")
    p.add_argument("--seed", type=int, help="Base generator seed")
    p.add_argument("--output-dir", dest="output_dir", help="Output directory")
    p.add_argument("--workers", type=int, help="Batch worker threads")
    p.add_argument(
        "--log-level",
        dest="log_level",
        type=str.upper,
        choices=LOG_LEVELS,
        help="Logging level (default: PGEX_LOG_LEVEL or WARNING)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgex",
        description="Proximal gradient experiments with extrapolation, FISTA and restarts.",
    )
    parser.add_argument("--version", action="version", version=f"pgex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="Run schedules on one instance and write traces")
    _add_common(run_p)
    run_p.add_argument("--instance", dest="instance_path", help="Replay a saved instance")
    run_p.add_argument(
        "--save-instance", action="store_true", help="Write the instance to instance.txt"
    )

    table_p = sub.add_parser("table1", help="Compare schedules over a batch of QP instances")
    _add_common(table_p)
    table_p.add_argument("--instances", type=int, help="Number of instances")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Merge the config file, flags and environment into a validated config.

    Raises:
        ConfigurationError: If any value is invalid
    """
    file_values: Dict[str, Any] = read_config_file(args.config) if args.config else {}
    cli_values: Dict[str, Any] = {
        key: getattr(args, key) for key in _CONFIG_FLAGS if getattr(args, key, None) is not None
    }
    if args.schedule:
        cli_values["schedules"] = parse_schedule_tokens(args.schedule)
    if getattr(args, "save_instance", False):
        cli_values["save_instance"] = True
    if args.command == "table1" and "family" not in cli_values and "family" not in file_values:
        cli_values["family"] = "qp"
    if "output_dir" not in cli_values and "output_dir" not in file_values:
        env_dir = get_output_dir_from_env()
        if env_dir is not None:
            cli_values["output_dir"] = env_dir
    return build_config(file_values, cli_values)


def _fmt(value: Optional[float], spec: str) -> str:
    return "-" if value is None else format(value, spec)


def _print_runs(config: ExperimentConfig, rows: List[List[str]]) -> None:
    print(f"{config.family.value} -> {config.output_dir}")
    for row in rows:
        print("  " + "  ".join(row))


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the ``pgex`` command; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging(args.log_level or get_log_level_from_env())
    except ValueError as exc:
        print(f"pgex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        config = config_from_args(args)
        if args.command == "table1":
            summary = run_table1(config)
            _print_runs(
                config,
                [
                    [
                        f"{a.schedule:<20}",
                        f"iter={_fmt(a.mean_iterations, '.1f')}",
                        f"fval={_fmt(a.mean_objective, '.6g')}",
                        f"failed={a.failed}",
                    ]
                    for a in summary.algorithms
                ],
            )
            return EXIT_NUMERICAL if summary.failures else EXIT_OK

        report = run_experiment(config)
        _print_runs(
            config,
            [
                [
                    f"{r.schedule:<20}",
                    f"iter={r.iterations}",
                    f"{r.termination_reason}",
                    f"F={r.final_objective:.10g}",
                ]
                for r in report.runs
            ],
        )
        if report.exit_status == EXIT_CAPPED:
            logger.warning("some runs hit the iteration cap before the stopping test held")
        return report.exit_status
    except (ConfigurationError, ArgumentError) as exc:
        print(f"pgex: error: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, ConvergenceError) as exc:
        print(f"pgex: numerical failure: {exc.message}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"pgex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
