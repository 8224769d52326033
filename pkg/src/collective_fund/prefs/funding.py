"""Present value of deterministic and life-contingent income streams."""

from enum import StrEnum

import numpy as np
import numpy.typing as npt

from collective_fund.errors import ValidationError
from collective_fund.mortality.table import MortalityTable
from collective_fund.prefs.schedules import Schedules


class FundingMode(StrEnum):
    """How an income stream is priced."""

    DETERMINISTIC_TERM = "deterministic_term"
    FAIR_LIFE = "fair_life"


def funding_cost(
    level: npt.ArrayLike, r: float, table: MortalityTable, mode: FundingMode | str
) -> float:
    """
    Money needed at t = 0 to pay `level` per year on every grid time.

    deterministic_term pays regardless of survival; fair_life pays only
    while alive (a fairly priced annuity).

    Raises:
        ValidationError: On a negative level or a level off the grid.
    """
    mode = FundingMode(mode)
    payments = np.broadcast_to(np.asarray(level, dtype=np.float64), table.p.shape)
    if np.any(payments < 0.0):
        raise ValidationError("income level must be non-negative")

    discount = np.exp(-r * table.t_grid)
    if mode is FundingMode.FAIR_LIFE:
        discount = discount * table.survival_curve[:-1]
    return float(np.sum(discount * payments) * table.dt)


def adequacy_funding_cost(
    schedules: Schedules, r: float, table: MortalityTable, mode: FundingMode | str
) -> float:
    """X_AL: the cost of a pension paying max(AL_t, 0)."""
    return funding_cost(schedules.adequacy_floor, r, table, mode)
