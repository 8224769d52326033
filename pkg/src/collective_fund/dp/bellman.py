"""Backward induction on a wealth grid for KM and vNM preferences.

At each grid time the one-step problem is

    max_{gamma, pi} flow(gamma) + C(x - gamma dt, pi)

where C depends on the savings y = x - gamma dt and the risky weight
only. The solver tabulates C on the wealth nodes for a coarse set of
weights, refines the best weight per savings node, and then searches
consumption against the interpolated envelope. The value stored at a
node is always recomputed directly from the chosen controls, so that
`evaluate_policy` on the solver's own policy reproduces it exactly.
"""

import functools
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from loguru import logger

from collective_fund.config.models import GridConfig
from collective_fund.dp.fund_kind import FundKind, FundKindName, Outcomes
from collective_fund.dp.grid import consumption_fractions, portfolio_grid, wealth_nodes
from collective_fund.dp.interpolation import (
    TerminalValue,
    ValueInterpolant,
    planned_consumption,
)
from collective_fund.dp.search import golden_section_max
from collective_fund.dp.tables import PolicyTable, SolveDiagnostics, ValueFunction
from collective_fund.dp.value_models import ValueModel, value_model_for
from collective_fund.errors import EvaluationError, SolverError, ValidationError
from collective_fund.market.params import MarketParams
from collective_fund.market.quadrature import return_node_matrix
from collective_fund.mortality.table import MortalityTable
from collective_fund.ports.strategy import StrategyPort
from collective_fund.prefs.km import KMPreferences
from collective_fund.prefs.vnm import VNMPreferences
from collective_fund.utils.parallel import resolve_worker_count

FloatArray = npt.NDArray[np.float64]

# Relative slack when checking gamma * dt <= x for a fixed policy.
_FEASIBILITY_SLACK = 1e-12


@dataclass(frozen=True)
class _Problem:
    model: ValueModel
    mp: MarketParams
    kind: FundKind
    grid: GridConfig
    nodes: FloatArray
    dt: float
    survivals: FloatArray


@dataclass
class _SliceResult:
    gamma: FloatArray
    pi: FloatArray
    value: FloatArray
    corners: int = 0
    clamped: int = 0
    lookups: int = 0


@dataclass
class _Step:
    """Everything needed to evaluate continuations at one grid time."""

    problem: _Problem
    t_index: int
    next_interpolants: list[ValueInterpolant | TerminalValue]
    _outcomes: dict[int, Outcomes] = field(default_factory=dict)

    @property
    def s(self) -> float:
        return float(self.problem.survivals[self.t_index])

    def outcomes(self, slice_index: int) -> Outcomes:
        if slice_index not in self._outcomes:
            self._outcomes[slice_index] = self.problem.kind.outcomes(
                self.s, slice_index, self.problem.grid.binomial_cutoff
            )
        return self._outcomes[slice_index]

    def continuation(
        self, savings: npt.ArrayLike, pi: npt.ArrayLike, slice_index: int
    ) -> tuple[FloatArray, int]:
        """C(y, pi) and the number of next-step lookups outside the grid."""
        y, weight = np.broadcast_arrays(
            np.asarray(savings, dtype=np.float64), np.asarray(pi, dtype=np.float64)
        )
        if self.s <= 0.0:
            return np.zeros(y.shape), 0

        problem = self.problem
        R, w = return_node_matrix(problem.mp, weight, problem.dt, problem.grid.quadrature_K)
        out = self.outcomes(slice_index)
        base = y[..., None] * R
        next_values = np.empty(base.shape + (out.multipliers.size,))
        clamped = 0
        for j, (multiplier, nxt) in enumerate(zip(out.multipliers, out.next_slices, strict=True)):
            wealth_next = base * multiplier
            interpolant = self.next_interpolants[int(nxt)]
            next_values[..., j] = interpolant(wealth_next)
            clamped += interpolant.out_of_range(wealth_next)

        weights = (w[:, None] * out.probabilities[None, :]).ravel()
        flat = next_values.reshape(y.shape + (weights.size,))
        return problem.model.continuation(flat, weights, self.s), clamped

    def node_value(
        self, wealth: FloatArray, gamma: FloatArray, pi: FloatArray, slice_index: int
    ) -> tuple[FloatArray, int]:
        """flow(gamma) + C(x - gamma dt, pi) evaluated directly."""
        savings = np.maximum(wealth - gamma * self.problem.dt, 0.0)
        cont, clamped = self.continuation(savings, pi, slice_index)
        return self.problem.model.flow(gamma, self.t_index) + cont, clamped


def _savings_envelope(
    step: _Step, slice_index: int, pi_grid: FloatArray
) -> tuple[FloatArray, FloatArray]:
    """Best weight and continuation per savings node."""
    problem = step.problem
    nodes = problem.nodes
    table, _ = step.continuation(nodes[None, :], pi_grid[:, None], slice_index)
    best = np.argmax(table, axis=0)
    pi_star = pi_grid[best]
    q = table[best, np.arange(nodes.size)]

    if problem.grid.refine and pi_grid.size > 1:
        spacing = pi_grid[1] - pi_grid[0]
        lo = np.maximum(pi_star - spacing, pi_grid[0])
        hi = np.minimum(pi_star + spacing, pi_grid[-1])
        tol = max(np.sqrt(problem.grid.tolerance) * 0.1, problem.grid.tolerance)
        pi_refined, q_refined = golden_section_max(
            lambda p: step.continuation(nodes, p, slice_index)[0], lo, hi, tol=tol
        )
        better = q_refined > q
        pi_star = np.where(better, pi_refined, pi_star)
        q = np.where(better, q_refined, q)

    return pi_star, q


def _solve_slice(step: _Step, slice_index: int) -> _SliceResult:
    problem = step.problem
    model = problem.model
    x = problem.nodes
    dt = problem.dt
    fractions = consumption_fractions(problem.grid)
    pi_grid = portfolio_grid(problem.grid)
    t = step.t_index

    def flow_at(f: FloatArray) -> FloatArray:
        return model.flow(x * f / dt, t)

    if step.s <= 0.0:
        # No future: consume everything, hold the lowest admissible weight.
        objective = flow_at(fractions[:, None] * np.ones_like(x))
        best = np.argmax(objective, axis=0)
        f_star = fractions[best]
        pi_node = np.full(x.shape, pi_grid[0])
        corners = 0
    elif problem.grid.refine:
        pi_star, q = _savings_envelope(step, slice_index, pi_grid)
        envelope = ValueInterpolant(x, q, model)

        def total(f: FloatArray) -> FloatArray:
            return flow_at(f) + envelope(x * (1.0 - f))

        objective = np.stack([total(np.full(x.shape, f)) for f in fractions])
        best = np.argmax(objective, axis=0)
        f_star = fractions[best]
        corners = int(np.count_nonzero(best == fractions.size - 1))

        step_f = fractions[1] - fractions[0]
        lo = np.maximum(f_star - step_f, 0.0)
        hi = np.minimum(f_star + step_f, 1.0)
        f_refined, v_refined = golden_section_max(total, lo, hi, tol=problem.grid.tolerance)
        coarse = objective[best, np.arange(x.size)]
        f_star = np.where(v_refined > coarse, f_refined, f_star)
        pi_node = np.interp(x * (1.0 - f_star), x, pi_star)
    else:
        # Exhaustive search: every (fraction, weight) pair is valued directly.
        objective = np.empty((fractions.size, pi_grid.size, x.size))
        for k, f in enumerate(fractions):
            cont, _ = step.continuation(x[None, :] * (1.0 - f), pi_grid[:, None], slice_index)
            objective[k] = flow_at(np.full(x.shape, f))[None, :] + cont
        flat = np.nan_to_num(objective.reshape(-1, x.size), nan=-np.inf)
        best = np.argmax(flat, axis=0)
        f_star = fractions[best // pi_grid.size]
        pi_node = pi_grid[best % pi_grid.size]
        corners = int(np.count_nonzero(best // pi_grid.size == fractions.size - 1))

    gamma = x * f_star / dt
    value, clamped = step.node_value(x, gamma, pi_node, slice_index)
    lookups = x.size * problem.grid.quadrature_K * step.outcomes(slice_index).multipliers.size
    return _SliceResult(gamma, pi_node, value, corners, clamped, lookups if step.s > 0 else 0)


def _check_finite(values: FloatArray, nodes: FloatArray, t: float) -> None:
    bad = ~np.isfinite(values)
    if np.any(bad):
        first = int(np.argmax(bad))
        raise SolverError("non-finite value", t=t, x=float(nodes[first]))


def _problem(
    prefs: KMPreferences | VNMPreferences,
    mp: MarketParams,
    table: MortalityTable,
    kind: FundKind,
    grid: GridConfig,
) -> _Problem:
    if isinstance(prefs, KMPreferences) and prefs.n_steps != table.n_steps:
        raise ValidationError(
            f"schedules cover {prefs.n_steps} steps but table has {table.n_steps}"
        )
    return _Problem(
        model=value_model_for(prefs),
        mp=mp,
        kind=kind,
        grid=grid,
        nodes=wealth_nodes(grid),
        dt=table.dt,
        survivals=np.asarray(table.one_period_survivals),
    )


def _next_lookups(
    problem: _Problem,
    t: int,
    values: FloatArray,
    consumption: Callable[[int, FloatArray], FloatArray],
) -> list[ValueInterpolant | TerminalValue]:
    """Lookups into step t + 1; exact when that step has no future."""
    n_slices = problem.kind.n_slices
    if t + 1 >= problem.survivals.size:
        return []
    if problem.survivals[t + 1] <= 0.0:
        return [
            TerminalValue(problem.model, t + 1, problem.dt, functools.partial(consumption, j))
            for j in range(n_slices)
        ]
    return [
        ValueInterpolant(problem.nodes, values[t + 1, j], problem.model) for j in range(n_slices)
    ]


def solve_km(
    prefs: KMPreferences | VNMPreferences,
    mp: MarketParams,
    table: MortalityTable,
    kind: FundKind,
    grid: GridConfig,
    max_workers: int | None = None,
) -> tuple[PolicyTable, ValueFunction]:
    """
    Optimal consumption and investment by backward induction.

    Args:
        prefs: KM or vNM preferences.
        mp: Market parameters.
        table: Truncated mortality table.
        kind: Fund structure; finite collectives are solved for every
            survivor count up to kind.n at once.
        grid: Resolved grid (explicit wealth bounds).
        max_workers: Thread cap for survivor-count slices; None reads
            COLLECTIVE_FUND_THREADS.

    Returns:
        (policy, value function).

    Raises:
        SolverError: If a node value is not finite.
        ConfigurationError: If the grid bounds are unresolved.
    """
    problem = _problem(prefs, mp, table, kind, grid)
    n_steps, n_slices, n_nodes = table.n_steps, kind.n_slices, problem.nodes.size
    gamma = np.empty((n_steps, n_slices, n_nodes))
    pi = np.empty_like(gamma)
    values = np.empty_like(gamma)
    diagnostics = SolveDiagnostics(steps=n_steps)
    clamped = lookups = 0

    workers = min(resolve_worker_count(max_workers), n_slices)
    logger.info(
        "Solving {} for {} on {} steps x {} nodes x {} slices",
        type(prefs).__name__,
        kind.label,
        n_steps,
        n_nodes,
        n_slices,
    )

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for t in range(n_steps - 1, -1, -1):
            next_interps = _next_lookups(
                problem,
                t,
                values,
                lambda j, x, t=t: planned_consumption(
                    x, problem.nodes, gamma[t + 1, j], problem.dt
                ),
            )
            step = _Step(problem, t, next_interps)
            if workers > 1:
                results = list(pool.map(lambda j, st=step: _solve_slice(st, j), range(n_slices)))
            else:
                results = [_solve_slice(step, j) for j in range(n_slices)]

            for j, result in enumerate(results):
                _check_finite(result.value, problem.nodes, float(table.t_grid[t]))
                gamma[t, j], pi[t, j], values[t, j] = result.gamma, result.pi, result.value
                diagnostics.corner_nodes += result.corners
                clamped += result.clamped
                lookups += result.lookups
            logger.debug("Solved step t={} (s={:.6f})", table.t_grid[t], step.s)

    diagnostics.clamped_fraction = clamped / lookups if lookups else 0.0
    if diagnostics.clamped_fraction > 0.01:
        logger.warning(
            "{:.2%} of continuation lookups fell outside the wealth grid [{:g}, {:g}]",
            diagnostics.clamped_fraction,
            problem.nodes[0],
            problem.nodes[-1],
        )
    if diagnostics.corner_nodes:
        logger.warning(
            "{} nodes chose to save nothing before the last step; "
            "the consumption grid may be too coarse to bracket an interior optimum",
            diagnostics.corner_nodes,
        )

    for array in (gamma, pi, values):
        array.setflags(write=False)
    policy = PolicyTable(kind=kind, nodes=problem.nodes, dt=table.dt, gamma=gamma, pi=pi)
    value_function = ValueFunction(
        kind=kind,
        nodes=problem.nodes,
        dt=table.dt,
        values=values,
        model=problem.model,
        diagnostics=diagnostics,
    )
    logger.info("Solve finished for {}", kind.label)
    return policy, value_function


def _feasible(wealth: FloatArray, gamma: FloatArray, dt: float) -> npt.NDArray[np.bool_]:
    return (gamma >= 0.0) & (gamma * dt <= wealth * (1.0 + _FEASIBILITY_SLACK) + _FEASIBILITY_SLACK)


def evaluate_policy(
    policy: StrategyPort,
    prefs: KMPreferences | VNMPreferences,
    mp: MarketParams,
    table: MortalityTable,
    kind: FundKind,
    grid: GridConfig,
) -> ValueFunction:
    """
    Value of a fixed strategy: the solver's recursion without the max.

    Raises:
        EvaluationError: If the strategy spends more than the wealth held.
    """
    problem = _problem(prefs, mp, table, kind, grid)
    n_steps, n_slices, n_nodes = table.n_steps, kind.n_slices, problem.nodes.size
    values = np.empty((n_steps, n_slices, n_nodes))

    for t in range(n_steps - 1, -1, -1):
        next_interps = _next_lookups(
            problem, t, values, lambda j, x, t=t: policy.controls(t + 1, x, j + 1)[0]
        )
        step = _Step(problem, t, next_interps)
        for j in range(n_slices):
            gamma, pi = policy.controls(t, problem.nodes, j + 1)
            ok = _feasible(problem.nodes, gamma, problem.dt)
            if not np.all(ok):
                bad = int(np.argmin(ok))
                raise EvaluationError(
                    "policy consumes more than the wealth held",
                    t=float(table.t_grid[t]),
                    x=float(problem.nodes[bad]),
                )
            values[t, j], _ = step.node_value(problem.nodes, gamma, pi, j)
            _check_finite(values[t, j], problem.nodes, float(table.t_grid[t]))

    values.setflags(write=False)
    return ValueFunction(
        kind=kind, nodes=problem.nodes, dt=table.dt, values=values, model=problem.model
    )


def evaluate_path(
    strategy: StrategyPort,
    prefs: KMPreferences | VNMPreferences,
    mp: MarketParams,
    table: MortalityTable,
    kind: FundKind,
    x0: float,
) -> float:
    """
    Exact value of a riskless strategy from initial wealth `x0`.

    Without risky holdings the reachable states form a single wealth
    path, so the recursion runs along it with no interpolation.

    Returns:
        Gain at t = 0.

    Raises:
        ValidationError: If the strategy holds risk or the fund is a
            finite collective (whose survivor count is random).
        EvaluationError: If the strategy spends more than the wealth held.
    """
    if kind.is_finite:
        raise ValidationError("path evaluation needs deterministic mortality credits")
    model = value_model_for(prefs)
    dt = table.dt
    survivals = table.one_period_survivals
    growth = float(np.exp(mp.r * dt))

    consumption = np.empty(table.n_steps)
    wealth = x0
    for t in range(table.n_steps):
        gamma, pi = strategy.controls(t, np.array([wealth]))
        if np.any(pi != 0.0):
            raise ValidationError("path evaluation needs a riskless strategy")
        if not _feasible(np.array([wealth]), gamma, dt)[0]:
            raise EvaluationError(
                "policy consumes more than the wealth held", t=float(table.t_grid[t]), x=wealth
            )
        consumption[t] = float(gamma[0])
        credit = 1.0
        if kind.name is FundKindName.COLLECTIVE_INFINITE and survivals[t] > 0.0:
            credit = 1.0 / float(survivals[t])
        wealth = max(wealth - consumption[t] * dt, 0.0) * growth * credit

    value = np.zeros(1)
    for t in range(table.n_steps - 1, -1, -1):
        cont = model.continuation(value[None, :], np.ones(1), float(survivals[t]))
        value = model.flow(consumption[t : t + 1], t) + cont
    return float(model.gain(value)[0])
