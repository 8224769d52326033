"""Annuity pricing, annuity gains and the annuity-equivalent metric."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.optimize import brentq
from scipy.special import logsumexp

from collective_fund.dp.fund_kind import FundKind
from collective_fund.errors import PricingError, UnattainableGainError, ValidationError
from collective_fund.mortality.table import MortalityTable
from collective_fund.prefs.ez import EZPreferences, ez_step
from collective_fund.prefs.funding import FundingMode, funding_cost
from collective_fund.prefs.km import KMPreferences, satisfaction_equivalent
from collective_fund.prefs.vnm import VNMPreferences

FloatArray = npt.NDArray[np.float64]

# Doublings/halvings tried while bracketing a budget.
_MAX_BRACKET_STEPS = 400
_RTOL = 1e-10


@dataclass(frozen=True)
class ConstantStrategy:
    """An annuity: constant consumption until death and no risky holding.

    The payout is a contract, so it does not depend on wealth; under
    infinite-collective dynamics a fairly priced annuity's wealth runs
    out exactly at the last grid time.
    """

    payout: float
    kind: FundKind = FundKind.infinite()

    @property
    def is_riskless(self) -> bool:
        return True

    def controls(
        self,
        t_index: int,  # noqa: ARG002
        wealth: FloatArray,
        survivors: npt.NDArray[np.intp] | int = 1,  # noqa: ARG002
    ) -> tuple[FloatArray, FloatArray]:
        shape = np.shape(wealth)
        return np.full(shape, self.payout), np.zeros(shape)

    def out_of_domain(self, wealth: FloatArray) -> int:  # noqa: ARG002
        return 0


def annuity_payout(
    budget: float, r: float, table: MortalityTable, mode: FundingMode | str = FundingMode.FAIR_LIFE
) -> float:
    """
    Constant payout a budget buys: budget / cost of paying 1 per year.

    Raises:
        ValidationError: If the budget is not positive.
        PricingError: If the annuity factor is zero.
    """
    if not budget > 0.0:
        raise ValidationError(f"budget must be positive, got {budget}")
    factor = funding_cost(1.0, r, table, mode)
    if not factor > 0.0:
        raise PricingError("annuity factor is zero")
    return budget / factor


def cumulative_flows(
    prefs: KMPreferences | VNMPreferences, gamma: FloatArray
) -> FloatArray:
    """
    Running sum of per-step flows along consumption paths (last axis = time).

    KM flows are u(gamma, t) dt; vNM flows carry the discount beta**t.
    """
    g = np.asarray(gamma, dtype=np.float64)
    flows = np.empty(g.shape)
    for t in range(g.shape[-1]):
        flows[..., t] = prefs.flow(g[..., t], t)
    if isinstance(prefs, VNMPreferences):
        flows = flows * prefs.beta ** np.arange(g.shape[-1], dtype=np.float64)
    return np.cumsum(flows, axis=-1)


def death_integrated_gain(
    prefs: KMPreferences | VNMPreferences, totals: FloatArray, p: FloatArray
) -> FloatArray:
    """
    Expectation over the death time of the gain of running totals.

    Args:
        prefs: KM or vNM preferences.
        totals: Satisfaction (KM) or utility (vNM) accrued up to each
            grid time; last axis is time.
        p: Death masses on the same grid (conditional on being alive at
            the first time of `totals`).
    """
    if isinstance(prefs, KMPreferences):
        with np.errstate(over="ignore", invalid="ignore"):
            return -np.exp(np.asarray(logsumexp(-totals, axis=-1, b=p)))
    alive = p > 0.0
    return np.asarray(np.tensordot(totals[..., alive], p[alive], axes=([-1], [0])))


def annuity_gain(
    prefs: KMPreferences | VNMPreferences | EZPreferences, c: float, table: MortalityTable
) -> float:
    """
    Exact gain of consuming `c` per year until death.

    KM and vNM gains are the expectation over the death time of the
    family's gain; EZ returns Z_0 from the recursion along the certain
    stream.

    Raises:
        ValidationError: If c is negative.
    """
    if c < 0.0:
        raise ValidationError(f"annuity payout must be non-negative, got {c}")
    if isinstance(prefs, EZPreferences):
        survivals = table.one_period_survivals
        z = np.zeros(0)
        for t in range(table.n_steps - 1, -1, -1):
            value = ez_step(prefs, c, float(survivals[t]), z if z.size else np.ones(1))
            z = np.array([value])
        return float(z[0])
    stream = np.full(table.n_steps, c)
    return float(death_integrated_gain(prefs, cumulative_flows(prefs, stream), table.p))


def _comparable(prefs: KMPreferences | VNMPreferences | EZPreferences, gain: float) -> float:
    """Gains mapped to a scale where bracketing is well conditioned."""
    if isinstance(prefs, KMPreferences):
        return float(satisfaction_equivalent(gain))
    return gain


def annuity_equivalent(
    gain: float,
    prefs: KMPreferences | VNMPreferences | EZPreferences,
    table: MortalityTable,
    r: float,
    mode: FundingMode | str = FundingMode.FAIR_LIFE,
) -> float:
    """
    Budget whose annuity delivers `gain`.

    The annuity gain is increasing in the budget, so the root is unique.
    It is bracketed by doubling and halving from a budget of 1 and then
    located with Brent's method.

    Raises:
        UnattainableGainError: If the gain lies below the zero-payout
            gain or above every attainable one.
        PricingError: If the annuity factor is zero.
    """
    if isinstance(prefs, KMPreferences) and not gain < 0.0:
        raise UnattainableGainError(f"KM gains are negative, got {gain}")
    target = _comparable(prefs, gain)

    def excess(budget: float) -> float:
        c = annuity_payout(budget, r, table, mode)
        return _comparable(prefs, annuity_gain(prefs, c, table)) - target

    if not isinstance(prefs, EZPreferences):
        floor = _comparable(prefs, annuity_gain(prefs, 0.0, table))
        if target < floor:
            raise UnattainableGainError(
                f"gain {gain:g} is below the gain of consuming nothing"
            )
        if target == floor:
            return 0.0

    lo = hi = 1.0
    for _ in range(_MAX_BRACKET_STEPS):
        if excess(hi) >= 0.0:
            break
        lo, hi = hi, hi * 2.0
    else:
        raise UnattainableGainError(f"no annuity budget reaches gain {gain:g}")
    for _ in range(_MAX_BRACKET_STEPS):
        if excess(lo) <= 0.0:
            break
        hi, lo = lo, lo / 2.0
    else:
        raise UnattainableGainError(f"no annuity budget is small enough for gain {gain:g}")

    if excess(lo) == 0.0:
        return lo
    budget = float(brentq(excess, lo, hi, xtol=_RTOL * hi, rtol=_RTOL))
    logger.debug("Annuity equivalent of gain {:g} is {:.2f}", gain, budget)
    return budget


def annuity_outperformance(equivalent: float, budget: float) -> float:
    """
    equivalent / budget - 1.

    Raises:
        ValidationError: If the budget is not positive.
    """
    if not budget > 0.0:
        raise ValidationError(f"budget must be positive, got {budget}")
    return equivalent / budget - 1.0
