"""Wealth and control grids."""

import numpy as np
import numpy.typing as npt

from collective_fund.config.models import GridConfig
from collective_fund.errors import ConfigurationError


def wealth_nodes(grid: GridConfig) -> npt.NDArray[np.float64]:
    """
    Wealth nodes between the grid's explicit bounds.

    Raises:
        ConfigurationError: If the bounds have not been resolved.
    """
    if grid.wealth_min is None or grid.wealth_max is None:
        raise ConfigurationError("grid wealth bounds unresolved; call GridConfig.resolve(x0)")
    if grid.spacing == "log":
        return np.geomspace(grid.wealth_min, grid.wealth_max, grid.n_wealth)
    return np.linspace(grid.wealth_min, grid.wealth_max, grid.n_wealth)


def consumption_fractions(grid: GridConfig) -> npt.NDArray[np.float64]:
    """Coarse fractions of wealth consumed, 0 and 1 included."""
    return np.linspace(0.0, 1.0, grid.n_consumption)


def portfolio_grid(grid: GridConfig) -> npt.NDArray[np.float64]:
    """Coarse risky weights, ascending."""
    low, high = grid.pi_bounds
    if grid.n_pi == 1 or low == high:
        return np.array([low])
    return np.linspace(low, high, grid.n_pi)
