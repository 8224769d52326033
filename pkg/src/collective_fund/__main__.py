"""CLI entry point for collective fund experiments.

Every subcommand computes all of its results first and only then writes
the CSVs and the resolved configuration, so a failed run leaves nothing
behind. Exit codes: 0 success, 2 configuration error, 3 solver or
pricing error, 4 I/O error.
"""

import functools
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, NoReturn

import click

from collective_fund import __version__

EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


def _exit_code(error: Exception) -> int:
    from pydantic import ValidationError as SettingsValidationError

    from collective_fund.errors import (
        CollectiveFundError,
        ConfigurationError,
        ParseError,
        ReportError,
        ValidationError,
    )

    if isinstance(error, ConfigurationError | ValidationError | ParseError):
        return EXIT_CONFIG
    if isinstance(error, SettingsValidationError):
        return EXIT_CONFIG
    if isinstance(error, ReportError | OSError):
        return EXIT_IO
    if isinstance(error, CollectiveFundError):
        return EXIT_SOLVER
    raise error


def _fail(code: int, message: str) -> NoReturn:
    from loguru import logger

    logger.error(message)
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _load(
    config_path: Path | None,
    seed: int | None,
    out_dir: Path | None,
    paths: int | None,
    sims: int | None,
) -> Any:
    """Load the configuration and apply command-line overrides."""
    from collective_fund.config.loader import load_config

    overrides = {
        "simulation": {"seed": seed, "paths": paths},
        "population": {"sims": sims},
        "output": {"out_dir": out_dir},
    }
    return load_config(config_path, overrides)


def experiment_command(func: Callable[..., Any]) -> Callable[..., None]:
    """Attach the common options and run the experiment `func(config)` returns."""

    @click.option(
        "--config",
        "-c",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="Path to configuration file",
    )
    @click.option("--seed", type=click.IntRange(min=0), help="Master seed for simulations")
    @click.option(
        "--out-dir",
        type=click.Path(file_okay=False, path_type=Path),
        help="Directory for result CSVs",
    )
    @click.option("--paths", type=click.IntRange(min=2), help="Monte Carlo paths per fund kind")
    @click.option("--sims", type=click.IntRange(min=1), help="Heterogeneous fund simulations")
    @functools.wraps(func)
    def wrapper(
        config_path: Path | None,
        seed: int | None,
        out_dir: Path | None,
        paths: int | None,
        sims: int | None,
    ) -> None:
        from loguru import logger

        from collective_fund.services.reporting import ReportWriter
        from collective_fund.utils.logging import configure_logging

        try:
            cfg = _load(config_path, seed, out_dir, paths, sims)
        except (FileNotFoundError, ValueError) as e:
            _fail(EXIT_CONFIG, f"invalid configuration: {e}")

        configure_logging(cfg.logging)
        try:
            result = func(cfg)
            writer = ReportWriter(cfg.output.out_dir, cfg.simulation.seed)
            for name, frame in result.tables.items():
                writer.add(name, frame)
            written = writer.commit(cfg)
        except Exception as e:
            code = _exit_code(e)
            logger.opt(exception=e).debug("Run failed")
            _fail(code, f"{type(e).__name__}: {e}")

        for line in result.summary:
            click.echo(line)
        click.echo(f"Wrote {len(written)} files to {cfg.output.out_dir}")

    return wrapper


@click.group()
@click.version_option(version=__version__)
def cli() -> None:
    """Collective pension fund optimisation.

    Solves optimal consumption and investment for individual and
    collective funds, compares them against annuities, and simulates
    heterogeneous collectives.
    """
    pass


@cli.command()
@experiment_command
def solve(config: Any) -> Any:
    """Solve and write the optimal policy of each configured fund kind."""
    from collective_fund.services.experiments import run_solve

    return run_solve(config)


@cli.command()
@experiment_command
def compare(config: Any) -> Any:
    """Annuity equivalent and outperformance of each fund kind."""
    from collective_fund.services.experiments import run_compare

    return run_compare(config)


@cli.command()
@experiment_command
def fan(config: Any) -> Any:
    """Consumption percentiles over time for each fund kind."""
    from collective_fund.services.experiments import run_fan

    return run_fan(config)


@cli.command()
@experiment_command
def hetero(config: Any) -> Any:
    """Simulate a heterogeneous fund and report optimality ratios."""
    from collective_fund.services.experiments import run_hetero

    return run_hetero(config)


@cli.command()
@experiment_command
def evaluate(config: Any) -> Any:
    """Cross-check dynamic programming gains against Monte Carlo."""
    from collective_fund.services.experiments import run_evaluate

    return run_evaluate(config)


def main() -> None:
    """Main entry point."""
    cli()


if __name__ == "__main__":
    main()
