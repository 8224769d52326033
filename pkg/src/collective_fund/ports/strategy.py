"""Port interfaces for consumption-investment strategies."""

from typing import TYPE_CHECKING, Protocol

import numpy as np
import numpy.typing as npt

if TYPE_CHECKING:
    from collective_fund.dp.fund_kind import FundKind


class StrategyPort(Protocol):
    """Protocol for anything that chooses (gamma, pi) from the fund state.

    Implemented by solved policy tables, homogeneous (scale-free)
    solutions and fixed strategies such as an annuity.
    """

    @property
    def kind(self) -> "FundKind":
        """Fund structure whose wealth dynamics the strategy assumes."""
        ...

    @property
    def is_riskless(self) -> bool:
        """True when the strategy never holds the risky asset."""
        ...

    def controls(
        self,
        t_index: int,
        wealth: npt.NDArray[np.float64],
        survivors: npt.NDArray[np.intp] | int = 1,
    ) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """Consumption rate and risky weight at grid step `t_index`.

        Args:
            t_index: Grid step.
            wealth: Per-survivor wealth, any shape.
            survivors: Current survivor count (finite collectives only).

        Returns:
            (gamma, pi) shaped like `wealth`.
        """
        ...

    def out_of_domain(self, wealth: npt.NDArray[np.float64]) -> int:
        """Number of states outside the region where the strategy was computed."""
        ...
