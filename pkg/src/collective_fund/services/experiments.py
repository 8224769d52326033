"""Experiment orchestration behind the CLI subcommands.

Each runner builds the scenario, computes every result, and returns
named tables; nothing is written until the caller commits them.
"""

from dataclasses import dataclass, field

import pandas as pd
from loguru import logger

from collective_fund.config.models import Config
from collective_fund.dp.bellman import evaluate_path, solve_km
from collective_fund.dp.fund_kind import FundKind
from collective_fund.dp.homogeneous import HomogeneousSolution, solve_ez_homogeneous
from collective_fund.dp.tables import PolicyTable, ValueFunction, policy_frame
from collective_fund.errors import ConfigurationError
from collective_fund.evaluation.annuity import (
    ConstantStrategy,
    annuity_equivalent,
    annuity_gain,
    annuity_outperformance,
)
from collective_fund.evaluation.fan import fan_frame, fan_statistics, reference_frame
from collective_fund.evaluation.monte_carlo import estimate_gain, simulate_paths
from collective_fund.market.params import MarketParams
from collective_fund.pool.policy_cache import MemberPolicies, PolicyCache
from collective_fund.pool.population import PopulationSpec, generate_population, population_tables
from collective_fund.pool.simulation import HeteroResult, or_histogram, run_hetero_mc
from collective_fund.ports.strategy import StrategyPort
from collective_fund.prefs.ez import EZPreferences
from collective_fund.services.scenario import ANNUITY, Scenario, build_scenario, fund_kind_for
from collective_fund.utils.parallel import resolve_worker_count


@dataclass
class ExperimentResult:
    """Named result tables plus headline numbers for the console."""

    tables: dict[str, pd.DataFrame] = field(default_factory=dict)
    summary: list[str] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class SolvedKind:
    """A fund kind with its optimal strategy and gain at x0."""

    name: str
    kind: FundKind
    strategy: StrategyPort
    gain: float
    values: ValueFunction | None = None


def _survivors(kind: FundKind) -> int:
    return kind.n_slices


def solve_kind(scenario: Scenario, name: str) -> SolvedKind:
    """Optimal strategy of one fund kind and its gain at the initial budget."""
    kind = fund_kind_for(name, scenario.config)
    prefs = scenario.prefs
    if isinstance(prefs, EZPreferences):
        solution = solve_ez_homogeneous(prefs, scenario.mp, scenario.table, kind, scenario.grid)
        gain = solution.value(0, scenario.x0, _survivors(kind))
        return SolvedKind(name, kind, solution, gain)
    workers = resolve_worker_count(scenario.threads)
    policy, values = solve_km(prefs, scenario.mp, scenario.table, kind, scenario.grid, workers)
    gain = values.gain(0, scenario.x0, _survivors(kind))
    return SolvedKind(name, kind, policy, gain, values)


def _annuity(scenario: Scenario) -> ConstantStrategy:
    return ConstantStrategy(payout=scenario.payout)


def run_solve(config: Config) -> ExperimentResult:
    """Policy tables per configured fund kind."""
    scenario = build_scenario(config)
    result = ExperimentResult()
    for name in config.fund.kinds:
        if name == ANNUITY:
            continue
        solved = solve_kind(scenario, name)
        strategy = solved.strategy
        if isinstance(strategy, HomogeneousSolution):
            frame = strategy.frame(scenario.table.t_grid)
        else:
            assert isinstance(strategy, PolicyTable) and solved.values is not None
            frame = policy_frame(strategy, solved.values, scenario.table.t_grid)
        result.tables[f"policy_{name}.csv"] = frame
        result.summary.append(f"{solved.kind.label}: gain at x0 = {solved.gain:.6g}")
    return result


def run_compare(config: Config) -> ExperimentResult:
    """
    Annuity equivalent and outperformance per strategy.

    The annuity row's equivalent is the budget itself, so its
    outperformance is exactly zero.
    """
    scenario = build_scenario(config)
    pricing = config.pricing.annuity_mode
    rows = []
    for name in config.fund.kinds:
        if name == ANNUITY:
            equivalent = scenario.x0
        else:
            solved = solve_kind(scenario, name)
            equivalent = annuity_equivalent(
                solved.gain, scenario.prefs, scenario.table, scenario.mp.r, pricing
            )
        outperformance = annuity_outperformance(equivalent, scenario.x0)
        rows.append(
            {"fund_kind": name, "annuity_equivalent": equivalent, "outperformance": outperformance}
        )
        logger.info("{}: annuity equivalent {:.2f} ({:+.2%})", name, equivalent, outperformance)

    frame = pd.DataFrame(rows, columns=["fund_kind", "annuity_equivalent", "outperformance"])
    summary = [
        f"{row.fund_kind}: {row.annuity_equivalent / 1000:.1f}k ({row.outperformance:+.1%})"
        for row in frame.itertuples()
    ]
    return ExperimentResult(tables={"metrics.csv": frame}, summary=summary)


def run_fan(config: Config) -> ExperimentResult:
    """
    Consumption fans per fund kind on shared market paths.

    Also emits the adequacy level and the annuity payout as reference curves.
    """
    scenario = build_scenario(config)
    t_grid = scenario.table.t_grid
    n_paths, seed = config.simulation.paths, scenario.seed
    result = ExperimentResult()
    for name in config.fund.kinds:
        if name == ANNUITY:
            strategy: StrategyPort = _annuity(scenario)
            kind = strategy.kind
        else:
            solved = solve_kind(scenario, name)
            strategy, kind = solved.strategy, solved.kind
        paths = simulate_paths(
            strategy, scenario.prefs, scenario.mp, scenario.table, kind, scenario.x0, n_paths, seed
        )
        stats = fan_statistics(paths.consumption, paths.alive_weights)
        result.tables[f"fan_{name}.csv"] = fan_frame(stats, t_grid)
        result.summary.append(f"{name}: median consumption at t=0 = {stats.p50[0]:.2f}")

    result.tables["fan_reference.csv"] = reference_frame(
        t_grid, scenario.schedules.adequacy, scenario.payout
    )
    return result


def run_evaluate(config: Config) -> ExperimentResult:
    """
    DP gain against a Monte Carlo estimate for each strategy.

    Raises:
        ConfigurationError: For EZ preferences, whose gain is not an expectation.
    """
    scenario = build_scenario(config)
    prefs = scenario.prefs
    if isinstance(prefs, EZPreferences):
        raise ConfigurationError("evaluate needs km or vnm preferences")
    n_paths, seed = config.simulation.paths, scenario.seed

    rows = []
    for name in config.fund.kinds:
        if name == ANNUITY:
            strategy: StrategyPort = _annuity(scenario)
            kind = strategy.kind
            dp_gain = evaluate_path(strategy, prefs, scenario.mp, scenario.table, kind, scenario.x0)
            exact = annuity_gain(prefs, scenario.payout, scenario.table)
            logger.debug("Annuity gain: path {:.12g}, direct {:.12g}", dp_gain, exact)
        else:
            solved = solve_kind(scenario, name)
            strategy, kind, dp_gain = solved.strategy, solved.kind, solved.gain
        paths = simulate_paths(
            strategy, prefs, scenario.mp, scenario.table, kind, scenario.x0, n_paths, seed
        )
        assert paths.gains is not None
        estimate = estimate_gain(prefs, paths.gains, paths.out_of_domain)
        rows.append(
            {"fund_kind": name, "dp_gain": dp_gain, "mc_gain": estimate.mean, "mc_se": estimate.se}
        )

    frame = pd.DataFrame(rows, columns=["fund_kind", "dp_gain", "mc_gain", "mc_se"])
    summary = [
        f"{row.fund_kind}: dp {row.dp_gain:.6g}, mc {row.mc_gain:.6g} +/- {row.mc_se:.2g}"
        for row in frame.itertuples()
    ]
    return ExperimentResult(tables={"evaluate.csv": frame}, summary=summary)


def population_spec(config: Config) -> PopulationSpec:
    section = config.population
    return PopulationSpec(
        n=section.n,
        power_range=section.power_range,
        wealth_range=section.wealth_range,
        retirement_age_range=section.retirement_age_range,
        sex_split=section.sex_split,
        seed=section.seed,
    )


def run_hetero_experiment(config: Config) -> HeteroResult:
    """Generate the population, solve member policies and simulate the fund."""
    section = config.population
    cohort = section.cohort
    tables = population_tables(
        section.retirement_age_range,
        female_modal_age=cohort.female_modal_age,
        male_modal_age=cohort.male_modal_age,
        growth=cohort.growth,
        max_age=cohort.max_age,
        eps=config.mortality.truncation_eps,
    )
    members = generate_population(population_spec(config), tables)
    mp = MarketParams(r=config.market.r, mu=config.market.mu, sigma=config.market.sigma)
    n_max = min(len(members), config.grid.n_max)
    cache = PolicyCache(mp, config.grid, n_max)
    cache.presolve(members, resolve_worker_count(config.threads))
    policies = MemberPolicies(cache, members)
    return run_hetero_mc(
        members,
        policies,
        mp,
        section.sims,
        config.simulation.seed,
        n_max,
        control_variate=section.control_variate,
    )


def run_hetero(config: Config) -> ExperimentResult:
    """Per-member report and optimality-ratio histogram."""
    outcome = run_hetero_experiment(config)
    ratios = outcome.optimality_ratios
    share = float((ratios >= 0.95).mean())
    summary = [
        f"{ratios.size} members, {outcome.n_sims} simulations",
        f"OR >= 0.95 for {share:.1%} of members; max OR {ratios.max():.4f}",
        f"max money-conservation error {outcome.max_conservation_error:.2g}",
    ]
    return ExperimentResult(
        tables={
            "hetero_report.csv": outcome.report_frame(),
            "or_histogram.csv": or_histogram(ratios),
        },
        summary=summary,
    )
