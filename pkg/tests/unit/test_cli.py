"""Tests for CLI entry point."""

from collections.abc import Iterator
from pathlib import Path
from unittest.mock import patch

import pandas as pd
import pytest
from click.testing import CliRunner
from loguru import logger

from collective_fund.__main__ import EXIT_CONFIG, EXIT_IO, EXIT_SOLVER, cli
from collective_fund.config.models import Config
from collective_fund.errors import (
    CalibrationError,
    ConfigurationError,
    SolverError,
    UnattainableGainError,
)
from collective_fund.services.experiments import ExperimentResult

RUN_COMPARE = "collective_fund.services.experiments.run_compare"


@pytest.fixture
def runner() -> CliRunner:
    """Create CLI test runner."""
    return CliRunner()


@pytest.fixture(autouse=True)
def _reset_logger() -> Iterator[None]:
    yield
    logger.remove()


@pytest.fixture
def canned() -> ExperimentResult:
    """A finished comparison with one table."""
    frame = pd.DataFrame({"fund_kind": ["annuity"], "outperformance": [0.0]})
    return ExperimentResult(tables={"metrics.csv": frame}, summary=["annuity: 127.7k (+0.0%)"])


def test_cli_help(runner: CliRunner) -> None:
    """Test CLI help command."""
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "Collective pension fund optimisation" in result.output
    for command in ("solve", "compare", "fan", "hetero", "evaluate"):
        assert command in result.output


def test_cli_version(runner: CliRunner) -> None:
    """Test CLI version command."""
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "version" in result.output.lower()


@pytest.mark.parametrize("command", ["solve", "compare", "fan", "hetero", "evaluate"])
def test_common_options(runner: CliRunner, command: str) -> None:
    """Every subcommand takes the shared options."""
    result = runner.invoke(cli, [command, "--help"])
    assert result.exit_code == 0
    for option in ("--config", "--seed", "--out-dir", "--paths", "--sims"):
        assert option in result.output


def test_success_writes_and_reports(
    runner: CliRunner, tmp_path: Path, canned: ExperimentResult
) -> None:
    """Summary lines go to stdout and every file is written."""
    out_dir = tmp_path / "out"
    with patch(RUN_COMPARE, return_value=canned):
        result = runner.invoke(cli, ["compare", "--out-dir", str(out_dir), "--seed", "5"])
    assert result.exit_code == 0
    assert "annuity: 127.7k" in result.output
    assert f"Wrote 2 files to {out_dir}" in result.output
    assert (out_dir / "metrics.csv").read_text().startswith("# seed=5\n")
    assert (out_dir / "resolved_config.yaml").exists()


def test_overrides_reach_config(runner: CliRunner, tmp_path: Path) -> None:
    """--seed, --paths and --sims override the loaded values."""
    seen: dict[str, Config] = {}

    def capture(config: Config) -> ExperimentResult:
        seen["config"] = config
        return ExperimentResult()

    with patch(RUN_COMPARE, side_effect=capture):
        result = runner.invoke(
            cli,
            [
                "compare",
                "--out-dir",
                str(tmp_path),
                "--seed",
                "11",
                "--paths",
                "50",
                "--sims",
                "7",
            ],
        )
    assert result.exit_code == 0
    config = seen["config"]
    assert config.simulation.seed == 11
    assert config.simulation.paths == 50
    assert config.population.sims == 7
    assert config.output.out_dir == tmp_path


def test_invalid_yaml_exit_code(runner: CliRunner, tmp_path: Path) -> None:
    """A malformed config file exits with the configuration code."""
    config_path = tmp_path / "bad.yaml"
    config_path.write_text("market: [unclosed")
    result = runner.invoke(cli, ["compare", "--config", str(config_path)])
    assert result.exit_code == EXIT_CONFIG
    assert "invalid configuration" in result.output


def test_unknown_key_exit_code(runner: CliRunner, tmp_path: Path) -> None:
    """Unknown keys are configuration errors."""
    config_path = tmp_path / "typo.yaml"
    config_path.write_text("grid:\n  n_wealht: 100\n")
    result = runner.invoke(cli, ["compare", "--config", str(config_path)])
    assert result.exit_code == EXIT_CONFIG


def test_missing_config_file(runner: CliRunner, tmp_path: Path) -> None:
    """click rejects a config path that does not exist."""
    result = runner.invoke(cli, ["compare", "--config", str(tmp_path / "absent.yaml")])
    assert result.exit_code != 0


@pytest.mark.parametrize(
    ("error", "code"),
    [
        (ConfigurationError("unknown table"), EXIT_CONFIG),
        (SolverError("non-finite value", t=3.0, x=10.0), EXIT_SOLVER),
        (CalibrationError("adequacy never exceeds the state pension"), EXIT_SOLVER),
        (UnattainableGainError("gain above every annuity"), EXIT_SOLVER),
        (OSError("disk full"), EXIT_IO),
    ],
)
def test_error_exit_codes(
    runner: CliRunner, tmp_path: Path, error: Exception, code: int
) -> None:
    """Each error class maps to its exit code and nothing is written."""
    out_dir = tmp_path / "out"
    with patch(RUN_COMPARE, side_effect=error):
        result = runner.invoke(cli, ["compare", "--out-dir", str(out_dir)])
    assert result.exit_code == code
    assert "Error:" in result.output
    assert not out_dir.exists()


def test_unwritable_out_dir(runner: CliRunner, tmp_path: Path, canned: ExperimentResult) -> None:
    """Failing to write results exits with the I/O code."""
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    with patch(RUN_COMPARE, return_value=canned):
        result = runner.invoke(cli, ["compare", "--out-dir", str(blocker / "out")])
    assert result.exit_code == EXIT_IO
    assert "ReportError" in result.output


def test_unexpected_error_propagates(runner: CliRunner, tmp_path: Path) -> None:
    """Programming errors are not mapped to an exit code."""
    with patch(RUN_COMPARE, side_effect=KeyError("bug")):
        result = runner.invoke(cli, ["compare", "--out-dir", str(tmp_path)])
    assert isinstance(result.exception, KeyError)
