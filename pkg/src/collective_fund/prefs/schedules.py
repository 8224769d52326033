"""State pension and adequacy schedules on a mortality grid."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt

from collective_fund.errors import DomainError, ValidationError
from collective_fund.mortality.table import MortalityTable

# Slack, in steps, for a time to count as a grid time.
_GRID_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Schedules:
    """SP_t, AL_t and the floored adequacy level on grid times.

    Attributes:
        sp0: State pension at t = 0 (money/yr).
        r_tl: Growth rate of the state pension (/yr).
        total_adequacy: Income needed for an adequate retirement (money/yr).
        t_grid: Grid times in years.
        dt: Years per step.
    """

    sp0: float
    r_tl: float
    total_adequacy: float
    t_grid: npt.NDArray[np.float64]
    dt: float = 1.0

    def __post_init__(self) -> None:
        if self.sp0 < 0.0:
            raise ValidationError(f"state pension must be non-negative, got {self.sp0}")
        if self.dt <= 0.0:
            raise ValidationError(f"dt must be positive, got {self.dt}")

    @classmethod
    def for_table(
        cls, table: MortalityTable, sp0: float, r_tl: float, total_adequacy: float
    ) -> "Schedules":
        """Schedules on the grid of `table`."""
        return cls(
            sp0=sp0, r_tl=r_tl, total_adequacy=total_adequacy, t_grid=table.t_grid, dt=table.dt
        )

    @cached_property
    def state_pension(self) -> npt.NDArray[np.float64]:
        """SP_t = sp0 * exp(r_tl * t)."""
        return self.sp0 * np.exp(self.r_tl * self.t_grid)

    @cached_property
    def adequacy(self) -> npt.NDArray[np.float64]:
        """AL_t = total_adequacy - SP_t; negative once the state pension suffices."""
        return self.total_adequacy - self.state_pension

    @cached_property
    def adequacy_floor(self) -> npt.NDArray[np.float64]:
        """max(AL_t, 0)."""
        return np.maximum(self.adequacy, 0.0)

    @property
    def key(self) -> tuple[float, float, float, float, int]:
        """Hashable identity for caches."""
        return (self.sp0, self.r_tl, self.total_adequacy, self.dt, int(self.t_grid.size))

    def index_of(self, t: float) -> int:
        """
        Map a grid time to its index.

        Raises:
            DomainError: If t is not one of the schedule's grid times.
        """
        position = t / self.dt
        index = round(position) if np.isfinite(position) else -1
        if abs(position - index) > _GRID_TOL or not 0 <= index < self.t_grid.size:
            raise DomainError(f"t={t} is not a grid time of these schedules")
        return int(index)
