"""Discrete death-time distributions on a regular grid."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt

from collective_fund.errors import DomainError, ValidationError
from collective_fund.utils.hashing import compute_array_checksum

# Tolerance for snapping times onto the grid.
_GRID_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MortalityTable:
    """Probability mass of death p_t on times 0, dt, ..., T - dt.

    Death at grid time t means the member is alive (and consumes) at t
    but not at t + dt. The survival beyond the last grid point is 0.

    Attributes:
        p: Death mass per grid point, summing to one.
        dt: Years per step.
        name: Label used in logs and cache keys.
    """

    p: npt.NDArray[np.float64]
    dt: float = 1.0
    name: str = field(default="table")

    def __post_init__(self) -> None:
        p = np.array(self.p, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ValidationError("death masses must be a non-empty vector")
        if not np.all(np.isfinite(p)):
            raise ValidationError("death masses must be finite")
        if np.any(p < 0.0):
            raise ValidationError("death masses must be non-negative")
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ValidationError(f"dt must be positive, got {self.dt}")
        total = p.sum()
        if total <= 0.0:
            raise ValidationError("death masses sum to zero")
        p = p / total
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def n_steps(self) -> int:
        """Number of grid points."""
        return int(self.p.size)

    @property
    def horizon(self) -> float:
        """T: the first time with zero survival."""
        return self.n_steps * self.dt

    @cached_property
    def t_grid(self) -> npt.NDArray[np.float64]:
        """Grid times 0, dt, ..., T - dt."""
        grid = np.arange(self.n_steps, dtype=np.float64) * self.dt
        grid.setflags(write=False)
        return grid

    @cached_property
    def survival_curve(self) -> npt.NDArray[np.float64]:
        """S at grid times 0, dt, ..., T (length n_steps + 1, last entry 0)."""
        tail = np.cumsum(self.p[::-1])[::-1]
        curve = np.append(tail, 0.0)
        curve[0] = 1.0
        curve.setflags(write=False)
        return curve

    @cached_property
    def one_period_survivals(self) -> npt.NDArray[np.float64]:
        """s_t = S(t + dt) / S(t) for every grid point (0 where S(t) = 0)."""
        s = self.survival_curve
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(s[:-1] > 0.0, s[1:] / s[:-1], 0.0)
        ratio = np.clip(ratio, 0.0, 1.0)
        ratio.setflags(write=False)
        return ratio

    @cached_property
    def key(self) -> str:
        """Content hash identifying this table in policy caches."""
        return compute_array_checksum(self.p, self.dt)[:16]

    def index_of(self, t: float) -> int:
        """
        Map a grid time to its index.

        Raises:
            DomainError: If t is not on the grid.
        """
        position = t / self.dt
        index = round(position)
        if abs(position - index) > _GRID_TOL or not 0 <= index < self.n_steps:
            raise DomainError(f"t={t} is not a grid time of table {self.name!r}")
        return int(index)

    def expected_death_time(self) -> float:
        """E[tau] in years."""
        return float(np.dot(self.p, self.t_grid))

    def __repr__(self) -> str:
        return f"MortalityTable(name={self.name!r}, dt={self.dt}, n_steps={self.n_steps})"


def survival(table: MortalityTable, t: float) -> float:
    """
    P(tau >= t).

    Args:
        table: Mortality table.
        t: Years since retirement, in [0, T].

    Returns:
        S(t); S(0) = 1 and S(T) = 0.

    Raises:
        DomainError: If t lies outside [0, T].
    """
    if not np.isfinite(t) or t < -_GRID_TOL or t > table.horizon + _GRID_TOL:
        raise DomainError(f"t={t} outside [0, {table.horizon}]")
    index = int(np.ceil(t / table.dt - _GRID_TOL))
    index = min(max(index, 0), table.n_steps)
    return float(table.survival_curve[index])


def one_period_survival(table: MortalityTable, t: float) -> float:
    """s_t = S(t + dt) / S(t), with 0/0 taken as 0."""
    return float(table.one_period_survivals[table.index_of(t)])


def truncate_tail(table: MortalityTable, eps: float) -> MortalityTable:
    """
    Drop grid points whose survival is below `eps`.

    The removed mass moves to the last retained point.

    Args:
        table: Table to truncate.
        eps: Survival cut-off in (0, 1).

    Returns:
        Truncated table (the same object when nothing is dropped).

    Raises:
        ValidationError: If eps is not in (0, 1).
    """
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"truncation eps must lie in (0, 1), got {eps}")

    keep = int(np.count_nonzero(table.survival_curve[:-1] >= eps))
    keep = max(keep, 1)
    if keep == table.n_steps:
        return table

    p = np.array(table.p[:keep])
    p[-1] += table.p[keep:].sum()
    return MortalityTable(p=p, dt=table.dt, name=table.name)
