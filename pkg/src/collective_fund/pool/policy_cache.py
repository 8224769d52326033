"""Homogeneous-fund policies for every member type, solved once and shared.

A member type is its preferences plus its mortality table. For each type
the cache holds the finite-collective solution for every survivor count
up to n_max (count 1 is the individual fund) and the infinite-collective
solution. vNM types use the scale-free solver; KM types use the grid
solver on a grid resolved around the member's wealth.
"""

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger

from collective_fund.config.models import GridConfig
from collective_fund.dp.bellman import solve_km
from collective_fund.dp.fund_kind import FundKind
from collective_fund.dp.homogeneous import HomogeneousSolution, solve_ez_homogeneous
from collective_fund.dp.tables import PolicyTable, ValueFunction
from collective_fund.errors import ConfigurationError
from collective_fund.market.params import MarketParams
from collective_fund.pool.population import Member
from collective_fund.prefs.km import KMPreferences
from collective_fund.utils.parallel import resolve_worker_count

FloatArray = npt.NDArray[np.float64]
TypeKey = tuple[object, ...]


@dataclass(frozen=True, eq=False)
class MemberSolution:
    """Finite (1..n_max) and infinite collective solutions for one member type."""

    finite: HomogeneousSolution | PolicyTable
    infinite: HomogeneousSolution | PolicyTable
    finite_values: ValueFunction | None = None
    infinite_values: ValueFunction | None = None

    @property
    def n_max(self) -> int:
        return self.finite.kind.n_slices

    def gain_individual(self, wealth: float) -> float:
        """u_1: value of running one's own account."""
        return self._gain(self.finite, self.finite_values, wealth)

    def gain_infinite(self, wealth: float) -> float:
        """u_inf: value in the infinite collective."""
        return self._gain(self.infinite, self.infinite_values, wealth)

    @staticmethod
    def _gain(
        strategy: HomogeneousSolution | PolicyTable, values: ValueFunction | None, wealth: float
    ) -> float:
        if isinstance(strategy, HomogeneousSolution):
            return strategy.vnm_gain(wealth, survivors=1)
        assert values is not None
        return values.gain(0, wealth, survivors=1)


def type_key(member: Member) -> TypeKey:
    """Cache key of a member type."""
    return (member.prefs.key, member.table.key)


class PolicyCache:
    """Thread-safe store of member solutions; one writer at a time."""

    def __init__(self, mp: MarketParams, grid: GridConfig, n_max: int) -> None:
        self.mp = mp
        self.grid = grid
        self.n_max = n_max
        self._solutions: dict[TypeKey, MemberSolution] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._solutions)

    def _solve(self, member: Member) -> MemberSolution:
        finite = FundKind.finite(self.n_max)
        infinite = FundKind.infinite()
        if isinstance(member.prefs, KMPreferences):
            grid = self.grid.resolve(member.wealth)
            f_policy, f_values = solve_km(member.prefs, self.mp, member.table, finite, grid, 1)
            i_policy, i_values = solve_km(member.prefs, self.mp, member.table, infinite, grid, 1)
            return MemberSolution(f_policy, i_policy, f_values, i_values)
        return MemberSolution(
            finite=solve_ez_homogeneous(member.prefs, self.mp, member.table, finite, self.grid),
            infinite=solve_ez_homogeneous(member.prefs, self.mp, member.table, infinite, self.grid),
        )

    def presolve(self, members: list[Member], max_workers: int | None = None) -> None:
        """Solve every member type not yet cached."""
        pending: dict[TypeKey, Member] = {}
        for member in members:
            key = type_key(member)
            if key not in self._solutions and key not in pending:
                pending[key] = member
        if not pending:
            return

        workers = min(resolve_worker_count(max_workers), len(pending))
        logger.info("Solving policies for {} member types on {} threads", len(pending), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solved = zip(pending, pool.map(self._solve, pending.values()), strict=True)
            for key, solution in solved:
                with self._lock:
                    self._solutions.setdefault(key, solution)

    def get(self, member: Member) -> MemberSolution:
        """
        Cached solution of a member's type.

        Raises:
            ConfigurationError: If the type was never solved.
        """
        try:
            return self._solutions[type_key(member)]
        except KeyError:
            raise ConfigurationError(f"no policy cached for member {member.id}") from None


class MemberPolicies:
    """Per-member policy lookup by survivor count n'."""

    def __init__(self, cache: PolicyCache, members: list[Member]) -> None:
        self.members = members
        self._solutions = [cache.get(member) for member in members]

    def solution(self, member: int) -> MemberSolution:
        return self._solutions[member]

    def controls(
        self,
        member: int,
        t_index: int,
        wealth: FloatArray,
        n_prime: npt.NDArray[np.intp],
    ) -> tuple[FloatArray, FloatArray]:
        solution = self._solutions[member]
        x = np.asarray(wealth, dtype=np.float64)
        counts = np.broadcast_to(np.asarray(n_prime, dtype=np.intp), x.shape)
        if np.any(counts < 1):
            raise ConfigurationError("survivor count must be at least 1")
        gamma = np.empty(x.shape)
        pi = np.empty(x.shape)

        finite = counts <= solution.n_max
        if np.any(finite):
            gamma[finite], pi[finite] = solution.finite.controls(t_index, x[finite], counts[finite])
        if not np.all(finite):
            rest = ~finite
            gamma[rest], pi[rest] = solution.infinite.controls(t_index, x[rest])
        return gamma, pi

    def shadow_controls(
        self, member: int, t_index: int, wealth: FloatArray
    ) -> tuple[FloatArray, FloatArray]:
        """Infinite-collective controls, followed by the control-variate account."""
        return self._solutions[member].infinite.controls(t_index, np.asarray(wealth))
