"""Policy and value tables produced by the grid solver."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt
import pandas as pd

from collective_fund.dp.fund_kind import FundKind
from collective_fund.dp.interpolation import ValueInterpolant, planned_consumption
from collective_fund.dp.value_models import ValueModel
from collective_fund.errors import ValidationError

FloatArray = npt.NDArray[np.float64]


def _slices_for(
    kind: FundKind, survivors: npt.ArrayLike, shape: tuple[int, ...]
) -> npt.NDArray[np.intp]:
    if not kind.is_finite:
        return np.zeros(shape, dtype=np.intp)
    counts = np.broadcast_to(np.asarray(survivors, dtype=np.intp), shape)
    if np.any(counts < 1) or np.any(counts > kind.n_slices):
        raise ValidationError(f"survivor counts outside 1..{kind.n_slices}")
    return counts - 1


@dataclass
class SolveDiagnostics:
    """What the solver noticed while building a table."""

    # Share of continuation lookups that left the wealth grid.
    clamped_fraction: float = 0.0
    # Nodes at non-terminal steps whose optimum sat on a search-range end.
    corner_nodes: int = 0
    steps: int = 0


@dataclass(frozen=True, eq=False)
class PolicyTable:
    """Consumption rate and risky weight per (t, survivor slice, wealth node).

    Attributes:
        kind: Fund structure the policy was solved for.
        nodes: Wealth nodes.
        dt: Years per step.
        gamma: Consumption rates, shape (n_steps, n_slices, n_nodes).
        pi: Risky weights, same shape.
    """

    kind: FundKind
    nodes: FloatArray
    dt: float
    gamma: FloatArray
    pi: FloatArray

    @property
    def n_steps(self) -> int:
        return int(self.gamma.shape[0])

    @property
    def is_riskless(self) -> bool:
        return bool(np.all(self.pi == 0.0))

    def controls(
        self,
        t_index: int,
        wealth: FloatArray,
        survivors: npt.NDArray[np.intp] | int = 1,
    ) -> tuple[FloatArray, FloatArray]:
        """Linear interpolation in wealth; clamped to the boundary nodes."""
        x = np.asarray(wealth, dtype=np.float64)
        slices = _slices_for(self.kind, survivors, x.shape)
        gamma = np.empty(x.shape)
        pi = np.empty(x.shape)
        for slice_index in np.unique(slices):
            mask = slices == slice_index
            gamma[mask] = planned_consumption(
                x[mask], self.nodes, self.gamma[t_index, slice_index], self.dt
            )
            pi[mask] = np.interp(x[mask], self.nodes, self.pi[t_index, slice_index])
        return gamma, pi

    def out_of_domain(self, wealth: FloatArray) -> int:
        x = np.asarray(wealth)
        return int(np.count_nonzero((x < self.nodes[0]) | (x > self.nodes[-1])))


@dataclass(frozen=True, eq=False)
class ValueFunction:
    """Values conditional on being alive at t with per-survivor wealth x.

    Attributes:
        kind: Fund structure.
        nodes: Wealth nodes.
        dt: Years per step.
        values: Values in the model's native units, shape (n_steps, n_slices, n_nodes).
        model: Family-specific value model.
        diagnostics: Solver diagnostics.
    """

    kind: FundKind
    nodes: FloatArray
    dt: float
    values: FloatArray
    model: ValueModel
    diagnostics: SolveDiagnostics = field(default_factory=SolveDiagnostics)

    @cached_property
    def W(self) -> FloatArray:
        """Values in gain units (KM: -exp(-z); vNM: expected utility)."""
        return self.model.gain(self.values)

    @cached_property
    def _interpolants(self) -> dict[tuple[int, int], ValueInterpolant]:
        return {}

    def interpolant(self, t_index: int, slice_index: int = 0) -> ValueInterpolant:
        """Interpolant of the native values at one (t, slice)."""
        key = (t_index, slice_index)
        cache = self._interpolants
        if key not in cache:
            cache[key] = ValueInterpolant(self.nodes, self.values[t_index, slice_index], self.model)
        return cache[key]

    def gain(self, t_index: int, wealth: float, survivors: int = 1) -> float:
        """Gain at (t, x[, n]) by monotone interpolation."""
        slice_index = _slices_for(self.kind, survivors, ()).item()
        native = self.interpolant(t_index, slice_index)(np.asarray(wealth))
        return float(self.model.gain(native))


def policy_frame(policy: PolicyTable, values: ValueFunction, t_grid: FloatArray) -> pd.DataFrame:
    """
    One row per node with columns `t,x[,n],gamma,pi,W`.

    Args:
        policy: Solved policy.
        values: Matching value function.
        t_grid: Grid times in years.
    """
    n_steps, n_slices, n_nodes = policy.gamma.shape
    t_idx, s_idx, x_idx = np.meshgrid(
        np.arange(n_steps), np.arange(n_slices), np.arange(n_nodes), indexing="ij"
    )
    columns: dict[str, npt.ArrayLike] = {
        "t": t_grid[t_idx.ravel()],
        "x": policy.nodes[x_idx.ravel()],
    }
    if policy.kind.is_finite:
        columns["n"] = s_idx.ravel() + 1
    columns["gamma"] = policy.gamma.ravel()
    columns["pi"] = policy.pi.ravel()
    columns["W"] = values.W.ravel()
    return pd.DataFrame(columns)
