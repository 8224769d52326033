"""Experiment services: scenario building, experiment runners and CSV reports."""

from collective_fund.services.experiments import (
    ExperimentResult,
    SolvedKind,
    population_spec,
    run_compare,
    run_evaluate,
    run_fan,
    run_hetero,
    run_hetero_experiment,
    run_solve,
    solve_kind,
)
from collective_fund.services.reporting import RESOLVED_CONFIG, ReportWriter, frame_to_csv
from collective_fund.services.scenario import (
    ANNUITY,
    Scenario,
    build_prefs,
    build_scenario,
    fund_kind_for,
    load_table,
)

__all__ = [
    "ANNUITY",
    "RESOLVED_CONFIG",
    "ExperimentResult",
    "ReportWriter",
    "Scenario",
    "SolvedKind",
    "build_prefs",
    "build_scenario",
    "frame_to_csv",
    "fund_kind_for",
    "load_table",
    "population_spec",
    "run_compare",
    "run_evaluate",
    "run_fan",
    "run_hetero",
    "run_hetero_experiment",
    "run_solve",
    "solve_kind",
]
