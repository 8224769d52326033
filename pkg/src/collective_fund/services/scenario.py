"""Turn a validated configuration into the objects an experiment needs."""

from dataclasses import dataclass
from pathlib import Path

from loguru import logger

from collective_fund.config.models import Config, GridConfig
from collective_fund.dp.fund_kind import FundKind
from collective_fund.errors import ConfigurationError
from collective_fund.evaluation.annuity import annuity_payout
from collective_fund.market.params import MarketParams
from collective_fund.mortality.io import load_bundled_table, load_mortality_csv
from collective_fund.mortality.table import MortalityTable, truncate_tail
from collective_fund.prefs.ez import EZPreferences
from collective_fund.prefs.funding import adequacy_funding_cost
from collective_fund.prefs.km import KMPreferences
from collective_fund.prefs.schedules import Schedules
from collective_fund.prefs.vnm import VNMPreferences

ANNUITY = "annuity"


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything derived from a configuration before any solve.

    Attributes:
        config: The configuration the scenario was built from.
        table: Truncated mortality table.
        schedules: State pension and adequacy schedules.
        prefs: Preferences of the configured family.
        mp: Market parameters.
        x_al: Cost of funding the adequacy level.
        x0: Initial budget.
        grid: Grid with wealth bounds resolved around x0.
        payout: Annuity payout the budget buys.
    """

    config: Config
    table: MortalityTable
    schedules: Schedules
    prefs: KMPreferences | VNMPreferences | EZPreferences
    mp: MarketParams
    x_al: float
    x0: float
    grid: GridConfig
    payout: float

    @property
    def seed(self) -> int:
        return self.config.simulation.seed

    @property
    def threads(self) -> int:
        return self.config.threads


def load_table(config: Config) -> MortalityTable:
    """Bundled or file table, tail-truncated."""
    source = config.mortality
    if source.is_bundled:
        table = load_bundled_table(source.table)
    else:
        try:
            table = load_mortality_csv(Path(source.table))
        except FileNotFoundError as e:
            raise ConfigurationError(f"mortality table file not found: {source.table}") from e
    return truncate_tail(table, source.truncation_eps)


def build_prefs(
    config: Config, table: MortalityTable, schedules: Schedules
) -> KMPreferences | VNMPreferences | EZPreferences:
    """Preferences of the configured family; KM scale calibrated from lambda."""
    section = config.preferences
    if section.family == "km":
        return KMPreferences.calibrated(section.rho, section.lambda_, schedules)
    if section.family == "vnm":
        return VNMPreferences(rho=section.rho, beta=section.vnm_beta, dt=table.dt)
    return EZPreferences(alpha=section.ez.alpha, rho=section.ez.rho, beta=section.ez.beta)


def fund_kind_for(name: str, config: Config) -> FundKind:
    """
    Fund kind named in the configuration.

    Raises:
        ConfigurationError: For the annuity (not a fund kind) or unknown names.
    """
    if name == "individual":
        return FundKind.individual()
    if name == "collective_infinite":
        return FundKind.infinite()
    if name == "collective_finite":
        return FundKind.finite(config.fund.n, config.grid.n_max)
    raise ConfigurationError(f"{name!r} is not a fund kind")


def build_scenario(config: Config) -> Scenario:
    """
    Resolve a configuration into table, schedules, preferences, market and budget.

    Raises:
        ConfigurationError: If the mortality table cannot be found.
        CalibrationError: If the KM scale cannot be calibrated.
        PricingError: If the annuity factor is zero.
    """
    table = load_table(config)
    section = config.preferences
    schedules = Schedules.for_table(table, section.sp0, section.r_tl, section.total_adequacy)
    prefs = build_prefs(config, table, schedules)
    mp = MarketParams(r=config.market.r, mu=config.market.mu, sigma=config.market.sigma)

    x_al = adequacy_funding_cost(schedules, mp.r, table, config.pricing.x_al_mode)
    x0 = config.budget.x0 if config.budget.x0 is not None else config.budget.x_al_multiple * x_al
    payout = annuity_payout(x0, mp.r, table, config.pricing.annuity_mode)
    logger.info(
        "Scenario: table={} ({} steps), X_AL={:.2f}, x0={:.2f}, annuity payout={:.2f}",
        table.name,
        table.n_steps,
        x_al,
        x0,
        payout,
    )
    return Scenario(
        config=config,
        table=table,
        schedules=schedules,
        prefs=prefs,
        mp=mp,
        x_al=x_al,
        x0=x0,
        grid=config.grid.resolve(x0),
        payout=payout,
    )
