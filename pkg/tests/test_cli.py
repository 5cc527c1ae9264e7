"""Tests for the command-line runner."""

import pytest

from pgex import cli
from pgex._exceptions import NumericalError

SMALL_LASSO = ["--family", "lasso", "--m", "8", "--n", "16", "--s-sparsity", "2"]


def test_run_exit_ok(tmp_path, capsys):
    """Test a run whose stopping test holds exits with 0."""
    # With a large lambda the origin is optimal and the gap closes after one step.
    argv = ["run", *SMALL_LASSO, "--lambda", "1e6", "--output-dir", str(tmp_path)]
    assert cli.main(argv) == 0
    assert (tmp_path / "manifest.txt").exists()
    assert (tmp_path / "lasso_pg_trace.csv").exists()
    assert "duality_gap" in capsys.readouterr().out


def test_run_exit_capped(tmp_path):
    """Test hitting the iteration cap exits with 4."""
    argv = ["run", *SMALL_LASSO, "--lambda", "0.1", "--max-iter", "2"]
    assert cli.main([*argv, "--output-dir", str(tmp_path)]) == 4


def test_run_schedule_flag(tmp_path):
    """Test explicit schedules replace the family defaults."""
    argv = [
        "run",
        "--family",
        "qp",
        "--n",
        "4",
        "--schedule",
        "constant-frac",
        "0.5",
        "none",
        "--max-iter",
        "50",
        "--output-dir",
        str(tmp_path),
    ]
    assert cli.main(argv) in (0, 4)
    assert (tmp_path / "qp_pge-0.5_trace.csv").exists()
    assert (tmp_path / "qp_pg_trace.csv").exists()
    assert not (tmp_path / "qp_fista_trace.csv").exists()


def test_run_save_and_replay(tmp_path):
    """Test --save-instance and --instance."""
    first = tmp_path / "first"
    argv = ["run", "--family", "qp", "--n", "3", "--schedule", "none", "--max-iter", "20"]
    cli.main([*argv, "--save-instance", "--output-dir", str(first)])
    assert (first / "instance.txt").exists()
    second = tmp_path / "second"
    cli.main([*argv, "--instance", str(first / "instance.txt"), "--output-dir", str(second)])
    trace = "qp_pg_trace.csv"
    assert (first / trace).read_bytes() == (second / trace).read_bytes()


def test_usage_errors(tmp_path, capsys):
    """Test invalid values exit with 2."""
    out = ["--output-dir", str(tmp_path)]
    assert cli.main(["run", "--schedule", "bogus", *out]) == 2
    assert "unknown schedule" in capsys.readouterr().err
    assert cli.main(["run", "--m", "0", *out]) == 2
    assert cli.main(["run", "--family", "lasso", "--n", "3", "--s-sparsity", "5", *out]) == 2
    assert cli.main(["run", "--config", str(tmp_path / "missing.cfg"), *out]) == 2


def test_argparse_errors():
    """Test argparse rejects unknown families."""
    with pytest.raises(SystemExit) as info:
        cli.main(["run", "--family", "svm"])
    assert info.value.code == 2


def test_numerical_failure_exit(tmp_path, monkeypatch, capsys):
    """Test a numerical failure exits with 3."""

    def failing(config):
        raise NumericalError("non-finite iterate at k=7", iteration=7)

    monkeypatch.setattr(cli, "run_experiment", failing)
    assert cli.main(["run", *SMALL_LASSO, "--output-dir", str(tmp_path)]) == 3
    assert "numerical failure: non-finite iterate at k=7" in capsys.readouterr().err


def test_config_file_and_flags(tmp_path):
    """Test flags override the config file."""
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family=qp\nn=4\nmax_iter=7\nschedule=none\n")
    args = cli.build_parser().parse_args(["run", "--config", str(cfg), "--max-iter", "9"])
    config = cli.config_from_args(args)
    assert config.n == 4
    assert config.max_iter == 9
    assert [spec.kind for spec in config.schedules] == ["none"]


def test_config_file_unknown_key_exit(tmp_path, capsys):
    """Test a misspelled config key is a usage error."""
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family=lasso\nmax_itr=10\n")
    assert cli.main(["run", "--config", str(cfg), "--output-dir", str(tmp_path)]) == 2
    assert "max_itr" in capsys.readouterr().err


def test_output_dir_from_env(tmp_path, monkeypatch):
    """Test PGEX_OUTPUT_DIR is the fallback output directory."""
    monkeypatch.setenv("PGEX_OUTPUT_DIR", str(tmp_path / "env"))
    args = cli.build_parser().parse_args(["run", "--family", "qp"])
    assert cli.config_from_args(args).output_dir == tmp_path / "env"

    args = cli.build_parser().parse_args(["run", "--output-dir", str(tmp_path / "flag")])
    assert str(cli.config_from_args(args).output_dir) == str(tmp_path / "flag")


def test_table1(tmp_path, capsys):
    """Test the batch subcommand defaults to the QP family."""
    argv = ["table1", "--n", "4", "--instances", "2", "--max-iter", "200"]
    assert cli.main([*argv, "--output-dir", str(tmp_path)]) == 0
    assert (tmp_path / "table1_runs.csv").exists()
    assert (tmp_path / "table1_summary.csv").exists()
    assert "pge-0.98" in capsys.readouterr().out


def test_table1_rejects_convex_family(tmp_path):
    """Test batch mode on a convex family is a usage error."""
    assert cli.main(["table1", "--family", "lasso", "--output-dir", str(tmp_path)]) == 2


def test_version(capsys):
    """Test --version."""
    with pytest.raises(SystemExit):
        cli.main(["--version"])
    assert "pgex 0.1.0" in capsys.readouterr().out
