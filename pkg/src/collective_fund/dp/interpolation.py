"""Monotone interpolation of value slices."""

from collections.abc import Callable

import numpy as np
import numpy.typing as npt
from scipy.interpolate import PchipInterpolator

from collective_fund.dp.value_models import ValueModel

FloatArray = npt.NDArray[np.float64]


class ValueInterpolant:
    """PCHIP interpolant of one value slice in the model's coordinate.

    Outside the node range the model decides: KM clamps to the boundary
    node, vNM continues linearly with the end slope.
    """

    def __init__(self, nodes: FloatArray, values: FloatArray, model: ValueModel) -> None:
        self.model = model
        self.lo = float(nodes[0])
        self.hi = float(nodes[-1])
        self._xs = model.abscissa(nodes)
        self._ys = model.to_coordinate(values)
        self._pchip = PchipInterpolator(self._xs, self._ys, extrapolate=False)
        slope = self._pchip.derivative()
        self._slope_lo = float(slope(self._xs[0]))
        self._slope_hi = float(slope(self._xs[-1]))

    def __call__(self, x: npt.ArrayLike) -> FloatArray:
        wealth = np.asarray(x, dtype=np.float64)
        inside = np.clip(wealth, self.lo, self.hi)
        y = self._pchip(self.model.abscissa(inside))
        if self.model.extrapolate:
            below = wealth < self.lo
            above = wealth > self.hi
            if np.any(below) or np.any(above):
                u = self.model.abscissa(np.maximum(wealth, np.finfo(float).tiny))
                y = np.where(below, self._ys[0] + self._slope_lo * (u - self._xs[0]), y)
                y = np.where(above, self._ys[-1] + self._slope_hi * (u - self._xs[-1]), y)
        return self.model.from_coordinate(y)

    def out_of_range(self, x: npt.ArrayLike) -> int:
        """How many lookups fall outside the node range."""
        wealth = np.asarray(x)
        return int(np.count_nonzero((wealth < self.lo) | (wealth > self.hi)))


def planned_consumption(
    x: npt.ArrayLike, nodes: FloatArray, gamma_nodes: FloatArray, dt: float
) -> FloatArray:
    """Consumption rate at `x` by linear interpolation over the nodes, capped at x/dt."""
    wealth = np.asarray(x, dtype=np.float64)
    gamma = np.interp(wealth, nodes, gamma_nodes)
    return np.minimum(gamma, np.maximum(wealth, 0.0) / dt)


class TerminalValue:
    """Exact value at a step with no future: the flow of its consumption rule.

    Stands in for a `ValueInterpolant` of that step, so continuations
    into it need no interpolation.
    """

    def __init__(
        self,
        model: ValueModel,
        t_index: int,
        dt: float,
        consumption: Callable[[FloatArray], FloatArray],
    ) -> None:
        self.model = model
        self.t_index = t_index
        self.dt = dt
        self._consumption = consumption

    def __call__(self, x: npt.ArrayLike) -> FloatArray:
        wealth = np.asarray(x, dtype=np.float64)
        gamma = np.minimum(self._consumption(wealth), np.maximum(wealth, 0.0) / self.dt)
        return self.model.flow(gamma, self.t_index)

    def out_of_range(self, x: npt.ArrayLike) -> int:  # noqa: ARG002
        return 0
