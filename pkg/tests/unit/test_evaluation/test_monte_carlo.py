"""Tests for forward simulation, Monte Carlo gains and fans."""

import numpy as np
import pytest

from collective_fund.dp.bellman import solve_km
from collective_fund.dp.fund_kind import FundKind
from collective_fund.errors import ConfigurationError, ValidationError
from collective_fund.evaluation.annuity import ConstantStrategy, annuity_gain, annuity_payout
from collective_fund.evaluation.fan import fan_frame, fan_statistics, reference_frame
from collective_fund.evaluation.monte_carlo import estimate_gain, mc_gain, simulate_paths
from collective_fund.market.params import MarketParams
from collective_fund.mortality.table import MortalityTable
from collective_fund.prefs.ez import EZPreferences
from collective_fund.prefs.vnm import VNMPreferences

from tests.factories import km_for, small_grid


class TestSimulatePaths:
    """Test forward simulation."""

    def test_annuity_is_exact(self, market: MarketParams, short_table: MortalityTable) -> None:
        """A riskless annuity has the same gain on every path."""
        prefs = km_for(short_table)
        payout = 0.999 * annuity_payout(5e4, market.r, short_table)
        strategy = ConstantStrategy(payout=payout)
        estimate = mc_gain(strategy, prefs, market, short_table, strategy.kind, 5e4, 50, seed=7)
        assert estimate.mean == pytest.approx(annuity_gain(prefs, payout, short_table), rel=1e-9)
        assert estimate.se == pytest.approx(0.0, abs=1e-12)

    def test_same_seed_same_paths(self, market: MarketParams, short_table: MortalityTable) -> None:
        """Runs are reproducible."""
        vnm = VNMPreferences(rho=-1.0)
        policy, _ = solve_km(vnm, market, short_table, FundKind.finite(3), small_grid())
        a = simulate_paths(policy, vnm, market, short_table, FundKind.finite(3), 1.0, 20, seed=5)
        b = simulate_paths(policy, vnm, market, short_table, FundKind.finite(3), 1.0, 20, seed=5)
        np.testing.assert_array_equal(a.consumption, b.consumption)
        assert a.survivors is not None and b.survivors is not None
        np.testing.assert_array_equal(a.survivors, b.survivors)
        assert np.all(np.diff(a.survivors[:, :-1], axis=1) <= 0)

    def test_consumption_stops_after_last_step(
        self, market: MarketParams, short_table: MortalityTable
    ) -> None:
        """Terminal wealth is consumed in full."""
        vnm = VNMPreferences(rho=-1.0)
        policy, _ = solve_km(vnm, market, short_table, FundKind.infinite(), small_grid())
        kind = FundKind.infinite()
        paths = simulate_paths(policy, vnm, market, short_table, kind, 1.0, 10, seed=1)
        np.testing.assert_allclose(paths.consumption[:, -1] * short_table.dt, paths.wealth[:, -1])

    def test_ez_has_no_gains(self, market: MarketParams, short_table: MortalityTable) -> None:
        """EZ utility is not an expectation, so no per-path gains exist."""
        prefs = EZPreferences(alpha=-2.0, rho=-1.0)
        strategy = ConstantStrategy(payout=1.0)
        paths = simulate_paths(strategy, prefs, market, short_table, strategy.kind, 20.0, 3, seed=1)
        assert paths.gains is None
        with pytest.raises(ConfigurationError):
            mc_gain(strategy, prefs, market, short_table, strategy.kind, 20.0, 3, seed=1)

    def test_rejects_bad_sizes(self, market: MarketParams, short_table: MortalityTable) -> None:
        """At least one path and positive wealth."""
        strategy = ConstantStrategy(payout=1.0)
        vnm = VNMPreferences(rho=-1.0)
        with pytest.raises(ValidationError):
            simulate_paths(strategy, vnm, market, short_table, strategy.kind, 1.0, 0, seed=1)
        with pytest.raises(ValidationError):
            simulate_paths(strategy, vnm, market, short_table, strategy.kind, 0.0, 5, seed=1)


class TestMonteCarloAgainstDP:
    """Monte Carlo agrees with the dynamic programming value."""

    @pytest.mark.parametrize("kind", [FundKind.infinite(), FundKind.finite(3)])
    def test_vnm_within_four_se(
        self, market: MarketParams, short_table: MortalityTable, kind: FundKind
    ) -> None:
        """Power-utility values are exact on the grid, so only sampling error remains."""
        vnm = VNMPreferences(rho=-1.0)
        policy, values = solve_km(vnm, market, short_table, kind, small_grid())
        estimate = mc_gain(policy, vnm, market, short_table, kind, 1.0, 4000, seed=11)
        dp = values.gain(0, 1.0, kind.n_slices)
        assert abs(estimate.mean - dp) < 4.0 * estimate.se + 1e-6


class TestEstimateGain:
    """Test gain averaging."""

    def test_km_log_space_mean(self) -> None:
        """KM means match the plain mean when nothing underflows."""
        prefs = km_for(MortalityTable(p=np.ones(2)))
        gains = np.array([-0.5, -0.25, -1.0])
        estimate = estimate_gain(prefs, gains)
        assert estimate.mean == pytest.approx(gains.mean())
        assert estimate.se == pytest.approx(gains.std(ddof=1) / np.sqrt(3))

    def test_empty(self) -> None:
        """Nothing to average is an error."""
        with pytest.raises(ValidationError):
            estimate_gain(VNMPreferences(rho=-1.0), np.array([]))


class TestFan:
    """Test consumption fans."""

    def test_percentiles_over_living(self) -> None:
        """Percentiles use only paths where the member is alive."""
        c = np.tile(np.arange(101, dtype=float)[:, None], (1, 3))
        alive = np.array([1.0, 0.5, 0.0])
        stats = fan_statistics(c, alive)
        assert stats.p5[0] == pytest.approx(5.0)
        assert stats.p50[1] == pytest.approx(50.0)
        assert stats.p95[0] == pytest.approx(95.0)
        assert np.isnan(stats.p50[2])
        assert np.isnan(stats.sample[2])
        assert stats.n_in_sample.tolist() == [101, 101, 0]

    def test_needs_two_paths(self) -> None:
        """One path has no spread."""
        with pytest.raises(ValidationError):
            fan_statistics(np.ones((1, 4)), np.ones(4))

    def test_frames(self) -> None:
        """Fan and reference tables carry the documented columns."""
        t = np.arange(3.0)
        stats = fan_statistics(np.ones((4, 3)), np.ones(3))
        assert list(fan_frame(stats, t).columns) == ["t", "p5", "p50", "p95", "sample"]
        ref = reference_frame(t, np.array([3.0, 2.0, 1.0]), 2.5)
        assert list(ref.columns) == ["t", "adequacy", "annuity"]
        assert ref["annuity"].tolist() == [2.5, 2.5, 2.5]
