"""Forward simulation of strategies and Monte Carlo gain estimates.

Market shocks come from the MARKET substream indexed by path, so every
fund kind simulated with the same seed sees the same stock price paths.
The focal member's own death is integrated exactly on each path; in a
finite collective the other members' deaths move wealth and are drawn
from the DEATHS substream.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.special import logsumexp
from scipy.stats import binom

from collective_fund.dp.fund_kind import FundKind, FundKindName
from collective_fund.errors import ConfigurationError, ValidationError
from collective_fund.evaluation.annuity import cumulative_flows, death_integrated_gain
from collective_fund.market.params import MarketParams, realized_returns
from collective_fund.market.shocks import Stream, simulate_shocks, substream
from collective_fund.mortality.table import MortalityTable
from collective_fund.ports.strategy import StrategyPort
from collective_fund.prefs.ez import EZPreferences
from collective_fund.prefs.km import KMPreferences
from collective_fund.prefs.vnm import VNMPreferences

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class SimulatedPaths:
    """Per-path consumption and wealth of a member alive at each time.

    Attributes:
        consumption: Consumption rate, shape (n_paths, n_steps).
        wealth: Wealth before consuming, same shape.
        alive_weights: Probability the member is alive at each time.
        gains: Death-integrated gain per path (None for EZ).
        survivors: Survivor counts for finite collectives, else None.
        out_of_domain: States visited outside the strategy's domain.
        seed: Seed of the run.
    """

    consumption: FloatArray
    wealth: FloatArray
    alive_weights: FloatArray
    gains: FloatArray | None
    survivors: npt.NDArray[np.intp] | None
    out_of_domain: int
    seed: int

    @property
    def n_paths(self) -> int:
        return int(self.consumption.shape[0])


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean of per-path gains with its standard error."""

    mean: float
    se: float
    n_paths: int
    out_of_domain: int = 0


def _death_uniforms(seed: int, n_paths: int, n_steps: int) -> FloatArray:
    uniforms = np.empty((n_paths, n_steps))
    for i in range(n_paths):
        uniforms[i] = substream(seed, Stream.DEATHS, i).random(n_steps)
    return uniforms


def simulate_paths(
    strategy: StrategyPort,
    prefs: KMPreferences | VNMPreferences | EZPreferences,
    mp: MarketParams,
    table: MortalityTable,
    kind: FundKind,
    x0: float,
    n_paths: int,
    seed: int,
    survivors: int | None = None,
) -> SimulatedPaths:
    """
    Apply a strategy along simulated market paths.

    Args:
        strategy: Strategy to follow.
        prefs: Preferences used for the per-path gains.
        mp: Market parameters.
        table: Truncated mortality table.
        kind: Fund kind whose wealth dynamics apply.
        x0: Initial wealth.
        n_paths: Number of paths.
        seed: Master seed.
        survivors: Initial survivor count for finite collectives
            (defaults to the fund size).

    Raises:
        ValidationError: On non-positive sizes or wealth.
    """
    if n_paths < 1:
        raise ValidationError(f"need at least one path, got {n_paths}")
    if not x0 > 0.0:
        raise ValidationError(f"x0 must be positive, got {x0}")
    n_steps, dt = table.n_steps, table.dt
    survivals = table.one_period_survivals
    shocks = simulate_shocks(seed, n_paths, n_steps).values

    consumption = np.empty((n_paths, n_steps))
    wealth = np.empty((n_paths, n_steps))
    counts: npt.NDArray[np.intp] | None = None
    members: npt.NDArray[np.intp] | int = 1
    uniforms = None
    if kind.is_finite:
        members = np.full(n_paths, survivors or kind.n_slices, dtype=np.intp)
        counts = np.empty((n_paths, n_steps), dtype=np.intp)
        uniforms = _death_uniforms(seed, n_paths, n_steps)

    x = np.full(n_paths, float(x0))
    out_of_domain = 0
    for t in range(n_steps):
        wealth[:, t] = x
        if counts is not None:
            counts[:, t] = members
        out_of_domain += strategy.out_of_domain(x)
        gamma, pi = strategy.controls(t, x, members)
        consumption[:, t] = gamma
        s = float(survivals[t])
        if t == n_steps - 1 or s <= 0.0:
            consumption[:, t + 1 :] = 0.0
            wealth[:, t + 1 :] = 0.0
            if counts is not None:
                counts[:, t + 1 :] = 0
            break

        growth = np.maximum(x - gamma * dt, 0.0) * realized_returns(mp, pi, dt, shocks[:, t])
        if kind.name is FundKindName.COLLECTIVE_INFINITE:
            growth = growth / s
        elif uniforms is not None:
            others = np.maximum(binom.ppf(uniforms[:, t], members - 1, s), 0.0).astype(np.intp)
            growth = growth * members / (others + 1.0)
            members = others + 1
        x = growth

    if out_of_domain:
        logger.warning(
            "{} simulated states fell outside the strategy's wealth grid", out_of_domain
        )

    gains = None
    if not isinstance(prefs, EZPreferences):
        gains = death_integrated_gain(prefs, cumulative_flows(prefs, consumption), table.p)
    alive = np.broadcast_to(table.survival_curve[:-1], consumption.shape)
    return SimulatedPaths(
        consumption=consumption,
        wealth=wealth,
        alive_weights=alive,
        gains=gains,
        survivors=counts,
        out_of_domain=out_of_domain,
        seed=seed,
    )


def estimate_gain(
    prefs: KMPreferences | VNMPreferences, gains: FloatArray, out_of_domain: int = 0
) -> MCEstimate:
    """
    Mean and standard error of per-path gains.

    KM means are formed in log space so they stay accurate when gains
    are tiny; vNM gains are plain utilities.

    Raises:
        ValidationError: On empty input.
    """
    g = np.asarray(gains, dtype=np.float64).ravel()
    if g.size == 0:
        raise ValidationError("no gains to average")
    if isinstance(prefs, KMPreferences) and np.all(g < 0.0):
        mean = -float(np.exp(logsumexp(np.log(-g)) - np.log(g.size)))
    else:
        mean = float(np.mean(g))
    se = float(np.std(g, ddof=1) / np.sqrt(g.size)) if g.size > 1 else 0.0
    return MCEstimate(mean=mean, se=se, n_paths=int(g.size), out_of_domain=out_of_domain)


def mc_gain(
    strategy: StrategyPort,
    prefs: KMPreferences | VNMPreferences | EZPreferences,
    mp: MarketParams,
    table: MortalityTable,
    kind: FundKind,
    x0: float,
    n_paths: int,
    seed: int,
) -> MCEstimate:
    """
    Monte Carlo gain of a strategy from wealth `x0`.

    Raises:
        ConfigurationError: For EZ preferences, whose gain is not an expectation.
    """
    if isinstance(prefs, EZPreferences):
        raise ConfigurationError("Monte Carlo gains are defined for KM and vNM preferences")
    paths = simulate_paths(strategy, prefs, mp, table, kind, x0, n_paths, seed)
    assert paths.gains is not None
    estimate = estimate_gain(prefs, paths.gains, paths.out_of_domain)
    logger.info(
        "MC gain for {}: {:.6g} +/- {:.2g} over {} paths",
        kind.label,
        estimate.mean,
        estimate.se,
        n_paths,
    )
    return estimate
