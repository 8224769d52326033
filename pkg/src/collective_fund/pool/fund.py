"""Account keeping for a heterogeneous fund.

Each step every living member consumes and invests according to the
optimal policy of a homogeneous fund of n' look-alikes, where n' is the
current number of survivors (or the infinite collective above n_max).
Members who die during the step still invest; their estates are then
split among the survivors in proportion to the survivors' contributions
(1 - s_i) * X_i, the fair price of the survivorship claim each one holds.

Arrays carry a leading simulation axis: wealth has shape
(n_sims, n_members).
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger

from collective_fund.errors import ValidationError
from collective_fund.market.params import MarketParams, realized_returns
from collective_fund.ports.policies import MemberPolicyPort

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]


@dataclass(frozen=True, eq=False)
class FundState:
    """Accounts at grid step `t_index`.

    Attributes:
        t_index: Grid step.
        wealth: Account values, shape (n_sims, n_members); zero for the dead.
        alive: Survival flags, same shape.
        residual: Estates left with no survivor to receive them, per simulation.
    """

    t_index: int
    wealth: FloatArray
    alive: BoolArray
    residual: FloatArray

    @classmethod
    def initial(cls, wealth: npt.ArrayLike, n_sims: int = 1) -> "FundState":
        """Everyone alive at t = 0 with the given account values."""
        w = np.asarray(wealth, dtype=np.float64)
        if np.any(w < 0.0):
            raise ValidationError("initial wealth must be non-negative")
        return cls(
            t_index=0,
            wealth=np.tile(w, (n_sims, 1)),
            alive=np.ones((n_sims, w.size), dtype=bool),
            residual=np.zeros(n_sims),
        )

    @property
    def n_alive(self) -> npt.NDArray[np.intp]:
        """Survivors per simulation."""
        return np.count_nonzero(self.alive, axis=-1)


@dataclass(frozen=True, eq=False)
class StepReport:
    """What happened during one step.

    Attributes:
        consumption: Consumption rates, zero for members dead at the start.
        conservation_error: Largest relative money-conservation error.
        zero_contribution_estates: Estates split equally because the
            survivors' contributions summed to zero.
    """

    consumption: FloatArray
    conservation_error: float
    zero_contribution_estates: int


def contribution(survival: npt.ArrayLike, wealth_after_step: npt.ArrayLike) -> FloatArray:
    """
    Gamma = (1 - s) * X: a survivor's fair payment for its share of estates.

    Raises:
        ValidationError: On survival outside [0, 1] or negative wealth.
    """
    s = np.asarray(survival, dtype=np.float64)
    x = np.asarray(wealth_after_step, dtype=np.float64)
    if np.any((s < 0.0) | (s > 1.0)):
        raise ValidationError("survival probabilities must lie in [0, 1]")
    if np.any(x < 0.0):
        raise ValidationError("wealth must be non-negative")
    return (1.0 - s) * x


def redistribute_estates(
    post_wealth: FloatArray,
    was_alive: BoolArray,
    survives: BoolArray,
    survivals: FloatArray,
) -> tuple[FloatArray, FloatArray, int]:
    """
    Split the estates of members who died among the survivors.

    Args:
        post_wealth: Wealth after consumption and investment, (n_sims, n_members).
        was_alive: Members alive at the start of the step.
        survives: Members alive at the end of the step.
        survivals: One-step survival probabilities, broadcastable to the wealth.

    Returns:
        (new wealth, unallocated estate per simulation, number of estates
        split equally because total contribution was zero).
    """
    survivors = was_alive & survives
    dying = was_alive & ~survives
    estate = np.sum(np.where(dying, post_wealth, 0.0), axis=-1)

    s = np.broadcast_to(survivals, post_wealth.shape)
    paid = contribution(np.clip(s, 0.0, 1.0), np.maximum(post_wealth, 0.0))
    gamma = np.where(survivors, paid, 0.0)
    total = gamma.sum(axis=-1)
    n_survivors = np.count_nonzero(survivors, axis=-1)

    has_estate = estate > 0.0
    proportional = has_estate & (total > 0.0)
    equal = has_estate & (total <= 0.0) & (n_survivors > 0)
    orphaned = has_estate & (n_survivors == 0)

    with np.errstate(divide="ignore", invalid="ignore"):
        shares = np.where(proportional[:, None], gamma / total[:, None], 0.0)
        shares = np.where(
            equal[:, None] & survivors, 1.0 / np.maximum(n_survivors, 1)[:, None], shares
        )
    new_wealth = np.where(survivors, post_wealth + shares * estate[:, None], 0.0)
    residual = np.where(orphaned, estate, 0.0)

    zero_contribution = int(np.count_nonzero(equal))
    if zero_contribution:
        logger.warning(
            "{} estates split equally: survivors' contributions summed to zero", zero_contribution
        )
    return new_wealth, residual, zero_contribution


def step_fund(
    state: FundState,
    policies: MemberPolicyPort,
    mp: MarketParams,
    shocks: npt.ArrayLike,
    survives: BoolArray,
    survivals: FloatArray,
    dt: float,
    n_max: int,
) -> tuple[FundState, StepReport]:
    """
    Advance every simulation by one step.

    Args:
        state: Accounts at the start of the step.
        policies: Per-member homogeneous-fund policies.
        mp: Market parameters.
        shocks: Standard normal market shock per simulation, shared by all members.
        survives: True where a member alive at the start survives the step.
        survivals: Each member's one-step survival probability at this step.
        dt: Years per step.
        n_max: Largest survivor count with a finite-collective policy.

    Returns:
        The new state and a step report.
    """
    t = state.t_index
    n_sims, n_members = state.wealth.shape
    n_alive = state.n_alive
    # n' above n_max selects the infinite collective via n_max + 1.
    n_prime = np.where(n_alive > n_max, n_max + 1, np.maximum(n_alive, 1))
    z = np.asarray(shocks, dtype=np.float64)

    consumption = np.zeros((n_sims, n_members))
    post = np.zeros((n_sims, n_members))
    for i in range(n_members):
        living = state.alive[:, i]
        if not np.any(living):
            continue
        x = state.wealth[living, i]
        gamma, pi = policies.controls(i, t, x, n_prime[living])
        gamma = np.minimum(gamma, x / dt)
        consumption[living, i] = gamma
        post[living, i] = (x - gamma * dt) * realized_returns(mp, pi, dt, z[living])

    new_wealth, residual, zero_contribution = redistribute_estates(
        post, state.alive, survives, survivals
    )

    before = post.sum(axis=-1)
    after = new_wealth.sum(axis=-1) + residual
    scale = np.maximum(np.abs(before), np.finfo(float).tiny)
    error = float(np.max(np.abs(after - before) / scale)) if n_sims else 0.0

    new_state = FundState(
        t_index=t + 1,
        wealth=new_wealth,
        alive=state.alive & survives,
        residual=state.residual + residual,
    )
    return new_state, StepReport(consumption, error, zero_contribution)
