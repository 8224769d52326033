"""Monte Carlo runs of a heterogeneous fund and the optimality ratio.

Market shocks come from one MARKET substream per simulation and are
shared by every member; deaths come from one DEATHS substream per
simulation, an independent uniform per (step, member).

With the control variate on, every member also carries a shadow account
that follows that member's infinite-collective policy on the same market
path and is credited the deterministic mortality uplift 1/s. The shadow
dies with the member, so its realised gain has expectation u_inf and
shares the member's own-death noise:

    u_S = u_inf + mean(U_S - U_shadow).
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import pandas as pd
from loguru import logger

from collective_fund.errors import UndefinedRatioError, ValidationError
from collective_fund.market.params import MarketParams, realized_returns
from collective_fund.market.shocks import Stream, simulate_shocks, substream
from collective_fund.pool.fund import FundState, step_fund
from collective_fund.pool.policy_cache import MemberPolicies
from collective_fund.pool.population import Member
from collective_fund.prefs.km import KMPreferences
from collective_fund.prefs.vnm import VNMPreferences

FloatArray = npt.NDArray[np.float64]

OR_BIN_WIDTH = 0.005


@dataclass(frozen=True, eq=False)
class HeteroResult:
    """Per-member outcome of a heterogeneous run.

    Attributes:
        member_ids: Member identifiers.
        u_S: Estimated gain in the heterogeneous fund.
        u_S_plain: Plain sample mean of realised gains.
        se: Standard error of the estimator used for u_S.
        u_1: Individual-fund gain.
        u_inf: Infinite-collective gain.
        max_conservation_error: Largest relative money-conservation
            error over all steps and simulations.
        unallocated_residual: Mean estate per simulation left without survivors.
        n_sims: Simulations run.
    """

    member_ids: npt.NDArray[np.intp]
    u_S: FloatArray
    u_S_plain: FloatArray
    se: FloatArray
    u_1: FloatArray
    u_inf: FloatArray
    max_conservation_error: float
    unallocated_residual: float
    n_sims: int

    @property
    def optimality_ratios(self) -> FloatArray:
        return optimality_ratio(self.u_S, self.u_1, self.u_inf)

    def report_frame(self) -> pd.DataFrame:
        """Columns `member_id,u_S,u_1,u_inf,OR`."""
        return pd.DataFrame(
            {
                "member_id": self.member_ids,
                "u_S": self.u_S,
                "u_1": self.u_1,
                "u_inf": self.u_inf,
                "OR": self.optimality_ratios,
            }
        )


def optimality_ratio(u_S: npt.ArrayLike, u_1: npt.ArrayLike, u_inf: npt.ArrayLike) -> FloatArray:
    """
    (u_S - u_1) / (u_inf - u_1).

    Raises:
        UndefinedRatioError: If u_inf equals u_1 anywhere.
    """
    s, one, inf = (np.asarray(a, dtype=np.float64) for a in (u_S, u_1, u_inf))
    gap = inf - one
    if np.any(gap == 0.0):
        raise UndefinedRatioError("u_inf equals u_1; the optimality ratio is undefined")
    return (s - one) / gap


def or_histogram(ratios: npt.ArrayLike, width: float = OR_BIN_WIDTH) -> pd.DataFrame:
    """
    Counts of ratios in bins [k w, (k + 1) w).

    Returns:
        Columns `bin_left,bin_right,count`.
    """
    values = np.asarray(ratios, dtype=np.float64).ravel()
    values = values[np.isfinite(values)]
    if values.size == 0:
        return pd.DataFrame({"bin_left": [], "bin_right": [], "count": []})
    first = int(np.floor(values.min() / width))
    last = int(np.floor(values.max() / width))
    bins = np.floor(values / width).astype(np.int64)
    counts = np.bincount(bins - first, minlength=last - first + 1)
    lefts = np.arange(first, last + 1) * width
    return pd.DataFrame({"bin_left": lefts, "bin_right": lefts + width, "count": counts})


def _survival_matrix(members: list[Member], n_steps: int) -> FloatArray:
    """s_{i,t} per (step, member); zero after a member's table ends."""
    s = np.zeros((n_steps, len(members)))
    for i, member in enumerate(members):
        own = member.table.one_period_survivals
        s[: own.size, i] = own
    return s


def _flows(member: Member, gamma: FloatArray, t: int) -> FloatArray:
    prefs = member.prefs
    if t >= member.table.n_steps:
        return np.zeros(gamma.shape)
    flow = prefs.flow(gamma, t)
    if isinstance(prefs, VNMPreferences):
        flow = flow * prefs.beta**t
    return flow


def _realised_gain(member: Member, totals: FloatArray) -> FloatArray:
    if isinstance(member.prefs, KMPreferences):
        return -np.exp(-totals)
    return totals


def run_hetero_mc(
    members: list[Member],
    policies: MemberPolicies,
    mp: MarketParams,
    n_sims: int,
    seed: int,
    n_max: int,
    control_variate: bool = True,
    force_survival: bool = False,
) -> HeteroResult:
    """
    Simulate the fund and estimate each member's gain.

    Args:
        members: Fund members (all alive at t = 0).
        policies: Member policies from a presolved cache.
        mp: Market parameters.
        n_sims: Number of simulations.
        seed: Master seed.
        n_max: Largest survivor count with a finite-collective policy.
        control_variate: Use the shadow-account estimator for u_S.
        force_survival: Every member survives each step with s > 0.

    Raises:
        ValidationError: On an empty fund or non-positive n_sims.
    """
    if not members:
        raise ValidationError("fund has no members")
    if n_sims < 1:
        raise ValidationError(f"need at least one simulation, got {n_sims}")
    dt = members[0].table.dt
    if any(member.table.dt != dt for member in members):
        raise ValidationError("all members' tables must share one step length")

    n_members = len(members)
    n_steps = max(member.table.n_steps for member in members)
    survivals = _survival_matrix(members, n_steps)
    shocks = simulate_shocks(seed, n_sims, n_steps).values
    death_rngs = [substream(seed, Stream.DEATHS, sim) for sim in range(n_sims)]

    wealth0 = np.array([member.wealth for member in members])
    state = FundState.initial(wealth0, n_sims)
    shadow = np.tile(wealth0, (n_sims, 1))
    totals = np.zeros((n_sims, n_members))
    shadow_totals = np.zeros((n_sims, n_members))
    max_error = 0.0

    logger.info("Running {} simulations of a {}-member fund", n_sims, n_members)
    for t in range(n_steps):
        alive = state.alive
        if not np.any(alive):
            break
        if force_survival:
            survives = np.broadcast_to(survivals[t] > 0.0, (n_sims, n_members))
        else:
            draws = np.stack([rng.random(n_members) for rng in death_rngs])
            survives = draws < survivals[t][None, :]
        if control_variate:
            for i, member in enumerate(members):
                living = alive[:, i]
                if not np.any(living):
                    continue
                x = shadow[living, i]
                gamma, pi = policies.shadow_controls(i, t, x)
                gamma = np.minimum(gamma, x / dt)
                shadow_totals[living, i] += _flows(member, gamma, t)
                s = survivals[t, i]
                credit = 1.0 / s if s > 0.0 else 0.0
                grown = (x - gamma * dt) * realized_returns(mp, pi, dt, shocks[living, t])
                shadow[living, i] = grown * credit

        state, report = step_fund(
            state, policies, mp, shocks[:, t], survives, survivals[t], dt, n_max
        )
        for i, member in enumerate(members):
            living = alive[:, i]
            if np.any(living):
                totals[living, i] += _flows(member, report.consumption[living, i], t)
        max_error = max(max_error, report.conservation_error)
        logger.debug("Step {}: {:.1f} members alive on average", t, state.n_alive.mean())

    realised = np.column_stack([_realised_gain(m, totals[:, i]) for i, m in enumerate(members)])
    u_1 = np.array([policies.solution(i).gain_individual(m.wealth) for i, m in enumerate(members)])
    u_inf = np.array([policies.solution(i).gain_infinite(m.wealth) for i, m in enumerate(members)])

    plain = realised.mean(axis=0)
    if control_variate:
        shadow_realised = np.column_stack(
            [_realised_gain(m, shadow_totals[:, i]) for i, m in enumerate(members)]
        )
        diff = realised - shadow_realised
        u_S = u_inf + diff.mean(axis=0)
        spread = diff
    else:
        u_S = plain
        spread = realised
    se = spread.std(axis=0, ddof=1) / np.sqrt(n_sims) if n_sims > 1 else np.zeros(n_members)

    if max_error > 1e-9:
        logger.warning("Money conservation error reached {:.3g}", max_error)
    residual = float(state.residual.mean())
    if residual > 0.0:
        logger.warning("Estates of {:.6g} per simulation had no survivor to receive them", residual)

    return HeteroResult(
        member_ids=np.array([member.id for member in members]),
        u_S=u_S,
        u_S_plain=plain,
        se=se,
        u_1=u_1,
        u_inf=u_inf,
        max_conservation_error=max_error,
        unallocated_residual=residual,
        n_sims=n_sims,
    )
