"""Tests for the backward-induction solver and policy evaluation."""

import numpy as np
import pandas as pd
import pytest

from collective_fund.dp.bellman import evaluate_path, evaluate_policy, solve_km
from collective_fund.dp.fund_kind import FundKind
from collective_fund.dp.oracle import OracleInstance, brute_force_oracle
from collective_fund.dp.tables import policy_frame
from collective_fund.errors import EvaluationError, InstanceTooLargeError, ValidationError
from collective_fund.evaluation.annuity import ConstantStrategy, annuity_gain, annuity_payout
from collective_fund.market.params import MarketParams
from collective_fund.mortality.table import MortalityTable
from collective_fund.prefs.km import KMPreferences
from collective_fund.prefs.vnm import VNMPreferences

from tests.factories import km_for, small_grid

ORACLE_GRID = {"n_consumption": 41, "n_pi": 11, "quadrature_K": 3, "refine": False}


@pytest.fixture
def oracle_table() -> MortalityTable:
    return MortalityTable(p=np.array([0.3, 0.7]), dt=1.0, name="oracle")


class TestSinglePeriod:
    """With no future the member consumes everything."""

    def test_consumes_all(self, market: MarketParams) -> None:
        """gamma = x/dt and W = -exp(-u(x) dt)."""
        table = MortalityTable(p=np.array([1.0]), dt=1.0, name="one")
        prefs = km_for(table)
        grid = small_grid(x0=20000.0)
        policy, values = solve_km(prefs, market, table, FundKind.individual(), grid)

        nodes = policy.nodes
        np.testing.assert_allclose(policy.gamma[0, 0], nodes)
        expected = -np.exp(-prefs.utility_at(nodes, 0))
        np.testing.assert_allclose(values.W[0, 0], expected, rtol=1e-12)


class TestOracle:
    """Grid solver against exhaustive enumeration."""

    @pytest.mark.parametrize(
        ("kind", "survivors"),
        [(FundKind.individual(), 1), (FundKind.infinite(), 1), (FundKind.finite(2), 2)],
    )
    def test_vnm_matches_exactly(
        self,
        market: MarketParams,
        oracle_table: MortalityTable,
        vnm: VNMPreferences,
        kind: FundKind,
        survivors: int,
    ) -> None:
        """Power utility is interpolated exactly, so both agree to rounding."""
        grid = small_grid(wealth_min=1e-3, wealth_max=10.0, **ORACLE_GRID)
        _, values = solve_km(vnm, market, oracle_table, kind, grid)
        instance = OracleInstance(vnm, market, oracle_table, kind, x0=1.0)
        oracle = brute_force_oracle(instance, survivors)
        assert values.gain(0, 1.0, survivors) == pytest.approx(oracle, rel=1e-8)

    def test_km_close(self, market: MarketParams, oracle_table: MortalityTable) -> None:
        """KM values agree within interpolation error."""
        prefs = km_for(oracle_table)
        x0 = 30000.0
        grid = small_grid(x0=x0, n_wealth=400, min_multiple=1e-4, **ORACLE_GRID)
        _, values = solve_km(prefs, market, oracle_table, FundKind.individual(), grid)
        oracle = brute_force_oracle(
            OracleInstance(prefs, market, oracle_table, FundKind.individual(), x0=x0)
        )
        assert values.gain(0, x0) == pytest.approx(oracle, rel=1e-3)

    @pytest.mark.parametrize("instance", range(20))
    def test_random_instances_match(self, instance: int) -> None:
        """Random two-step, three-node problems agree with enumeration to 1e-6 in gain."""
        rng = np.random.default_rng([20190101, instance])
        p0 = rng.uniform(0.1, 0.6)
        table = MortalityTable(p=np.array([p0, 1.0 - p0]), dt=1.0, name=f"random-{instance}")
        r = rng.uniform(0.0, 0.04)
        market = MarketParams(r=r, mu=r + rng.uniform(0.01, 0.06), sigma=rng.uniform(0.1, 0.3))
        kind, survivors = [
            (FundKind.individual(), 1),
            (FundKind.infinite(), 1),
            (FundKind.finite(2), 1),
            (FundKind.finite(2), 2),
        ][rng.integers(4)]

        prefs: KMPreferences | VNMPreferences
        if rng.random() < 0.5:
            prefs = km_for(table, lambda_=rng.uniform(0.5, 3.0), rho=rng.uniform(-2.0, -0.5))
            target = 30000.0
        else:
            rho = rng.uniform(-2.5, -0.5) if rng.random() < 0.7 else rng.uniform(0.3, 0.8)
            prefs = VNMPreferences(rho=rho, beta=rng.uniform(0.9, 1.0))
            target = 1.0

        grid = small_grid(x0=target, min_multiple=1e-3, max_multiple=100.0, **ORACLE_GRID)
        _, values = solve_km(prefs, market, table, kind, grid)
        x0 = float(values.nodes[np.argmin(np.abs(values.nodes - target))])
        oracle = brute_force_oracle(OracleInstance(prefs, market, table, kind, x0=x0), survivors)
        assert abs(values.gain(0, x0, survivors) - oracle) <= 1e-6

    def test_refined_solver_not_worse(
        self, market: MarketParams, oracle_table: MortalityTable, vnm: VNMPreferences
    ) -> None:
        """Continuous refinement never loses against the discrete instance."""
        grid = small_grid(wealth_min=1e-3, wealth_max=10.0, quadrature_K=3)
        _, values = solve_km(vnm, market, oracle_table, FundKind.infinite(), grid)
        oracle = brute_force_oracle(
            OracleInstance(vnm, market, oracle_table, FundKind.infinite(), x0=1.0)
        )
        assert values.gain(0, 1.0) >= oracle - 1e-7

    def test_too_large(self, market: MarketParams, vnm: VNMPreferences) -> None:
        """Three steps are beyond the oracle."""
        table = MortalityTable(p=np.array([0.2, 0.3, 0.5]))
        with pytest.raises(InstanceTooLargeError):
            brute_force_oracle(OracleInstance(vnm, market, table, FundKind.individual(), x0=1.0))


class TestSolveKM:
    """Properties of solved policies and values."""

    def test_terminal_step_consumes_all(
        self, market: MarketParams, short_table: MortalityTable
    ) -> None:
        """s_T = 0 forces gamma dt = x."""
        prefs = km_for(short_table)
        policy, _ = solve_km(prefs, market, short_table, FundKind.infinite(), small_grid(x0=5e4))
        np.testing.assert_allclose(policy.gamma[-1, 0] * policy.dt, policy.nodes)

    def test_values_increase_with_wealth(
        self, market: MarketParams, short_table: MortalityTable
    ) -> None:
        """W is non-decreasing in x and stays negative."""
        prefs = km_for(short_table)
        _, values = solve_km(prefs, market, short_table, FundKind.individual(), small_grid(x0=5e4))
        assert np.all(np.diff(values.W, axis=-1) >= -1e-12)
        assert np.all(values.W < 0.0)

    def test_controls_within_bounds(
        self, market: MarketParams, short_table: MortalityTable
    ) -> None:
        """0 <= gamma dt <= x and pi within its bounds."""
        prefs = km_for(short_table)
        policy, _ = solve_km(prefs, market, short_table, FundKind.finite(3), small_grid(x0=5e4))
        assert np.all(policy.gamma >= 0.0)
        assert np.all(policy.gamma * policy.dt <= policy.nodes * (1.0 + 1e-12))
        assert np.all((policy.pi >= 0.0) & (policy.pi <= 1.0))

    def test_fund_size_monotonicity(
        self, market: MarketParams, short_table: MortalityTable, vnm: VNMPreferences
    ) -> None:
        """Individual <= finite(2) <= finite(5) <= infinite at every node."""
        grid = small_grid(x0=1.0)
        kinds = [FundKind.individual(), FundKind.finite(2), FundKind.finite(5), FundKind.infinite()]
        slices = [0, 1, 4, 0]
        W = [
            solve_km(vnm, market, short_table, k, grid)[1].W[:, s]
            for k, s in zip(kinds, slices, strict=True)
        ]
        for smaller, larger in zip(W, W[1:], strict=False):
            assert np.all(larger - smaller >= -1e-6 * np.abs(smaller))
        assert W[-1][0, 32] > W[0][0, 32]

    def test_collective_beats_individual_km(
        self, market: MarketParams, short_table: MortalityTable
    ) -> None:
        """Pooling mortality risk has strictly positive value."""
        prefs = km_for(short_table)
        grid = small_grid(x0=5e4)
        _, individual = solve_km(prefs, market, short_table, FundKind.individual(), grid)
        _, infinite = solve_km(prefs, market, short_table, FundKind.infinite(), grid)
        assert infinite.gain(0, 5e4) > individual.gain(0, 5e4)

    def test_schedule_mismatch(self, market: MarketParams, short_table: MortalityTable) -> None:
        """KM schedules must cover the table's grid."""
        other = MortalityTable(p=np.ones(4))
        with pytest.raises(ValidationError):
            solve_km(km_for(other), market, short_table, FundKind.individual(), small_grid())

    def test_policy_frame(self, market: MarketParams, oracle_table: MortalityTable) -> None:
        """One row per (t, n, x) with the documented columns."""
        prefs = km_for(oracle_table)
        kind = FundKind.finite(2)
        policy, values = solve_km(prefs, market, oracle_table, kind, small_grid(x0=3e4))
        frame = policy_frame(policy, values, oracle_table.t_grid)
        assert list(frame.columns) == ["t", "x", "n", "gamma", "pi", "W"]
        assert len(frame) == 2 * 2 * 64
        assert isinstance(frame, pd.DataFrame)


class TestEvaluatePolicy:
    """Fixed-policy evaluation."""

    def test_self_consistency(self, market: MarketParams, short_table: MortalityTable) -> None:
        """Evaluating the optimal policy reproduces the solver's values."""
        prefs = km_for(short_table)
        grid = small_grid(x0=5e4)
        for kind in (FundKind.individual(), FundKind.finite(3)):
            policy, values = solve_km(prefs, market, short_table, kind, grid)
            evaluated = evaluate_policy(policy, prefs, market, short_table, kind, grid)
            np.testing.assert_allclose(evaluated.values, values.values, rtol=1e-9, atol=1e-12)

    def test_infeasible_policy(self, market: MarketParams, short_table: MortalityTable) -> None:
        """Spending beyond wealth is reported with its state."""

        class Overspend:
            kind = FundKind.individual()
            is_riskless = True

            def controls(self, t_index, wealth, survivors=1):  # type: ignore[no-untyped-def]
                return 2.0 * np.asarray(wealth), np.zeros_like(wealth)

            def out_of_domain(self, wealth):  # type: ignore[no-untyped-def]
                return 0

        with pytest.raises(EvaluationError, match="consumes more than the wealth held"):
            evaluate_policy(
                Overspend(),
                km_for(short_table),
                market,
                short_table,
                FundKind.individual(),
                small_grid(x0=5e4),
            )


class TestEvaluatePath:
    """Exact evaluation of riskless strategies."""

    def test_annuity_matches_direct_sum(
        self, market: MarketParams, short_table: MortalityTable
    ) -> None:
        """Path recursion equals the death-time sum for a constant stream."""
        prefs = km_for(short_table)
        x0 = 5e4
        payout = 0.999 * annuity_payout(x0, market.r, short_table, "fair_life")
        strategy = ConstantStrategy(payout=payout)
        value = evaluate_path(strategy, prefs, market, short_table, strategy.kind, x0)
        assert value == pytest.approx(annuity_gain(prefs, payout, short_table), rel=1e-9)

    def test_lower_consumption_is_worse(
        self, market: MarketParams, short_table: MortalityTable
    ) -> None:
        """A strictly smaller constant stream has a strictly lower value."""
        prefs = km_for(short_table)
        x0 = 5e4
        payout = 0.999 * annuity_payout(x0, market.r, short_table, "fair_life")
        better = ConstantStrategy(payout=payout)
        worse = ConstantStrategy(payout=0.9 * payout)
        v_better = evaluate_path(better, prefs, market, short_table, better.kind, x0)
        v_worse = evaluate_path(worse, prefs, market, short_table, worse.kind, x0)
        assert v_worse < v_better

    def test_finite_collective_rejected(
        self, market: MarketParams, short_table: MortalityTable
    ) -> None:
        """Random survivor counts have no single path."""
        strategy = ConstantStrategy(payout=1.0)
        prefs = km_for(short_table)
        with pytest.raises(ValidationError):
            evaluate_path(strategy, prefs, market, short_table, FundKind.finite(2), 10.0)
