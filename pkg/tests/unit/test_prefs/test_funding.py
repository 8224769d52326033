"""Tests for funding costs and schedules."""

import numpy as np
import pytest

from collective_fund.errors import ValidationError
from collective_fund.mortality.table import MortalityTable
from collective_fund.prefs.funding import FundingMode, adequacy_funding_cost, funding_cost
from collective_fund.prefs.schedules import Schedules


@pytest.fixture
def ten_year_table() -> MortalityTable:
    return MortalityTable(p=np.full(10, 0.1), dt=1.0, name="ten")


class TestSchedules:
    """Test state pension and adequacy schedules."""

    def test_state_pension_growth(self, baseline_schedules: Schedules) -> None:
        """SP grows at r_tl."""
        sp = baseline_schedules.state_pension
        assert sp[0] == pytest.approx(6718.0)
        assert sp[10] == pytest.approx(6718.0 * np.exp(0.27))

    def test_adequacy_crosses_zero(self, baseline_schedules: Schedules) -> None:
        """The adequacy level turns negative after about 34 years."""
        negative = np.flatnonzero(baseline_schedules.adequacy < 0.0)
        assert negative.size > 0
        assert baseline_schedules.t_grid[negative[0]] == pytest.approx(34.0)
        assert np.all(baseline_schedules.adequacy_floor >= 0.0)

    def test_rejects_negative_pension(self) -> None:
        """The state pension is non-negative."""
        with pytest.raises(ValidationError):
            Schedules(sp0=-1.0, r_tl=0.0, total_adequacy=1.0, t_grid=np.arange(3.0))


class TestFundingCost:
    """Test present values of income streams."""

    def test_riskless_term(self, ten_year_table: MortalityTable) -> None:
        """r = 0, level 1 over ten years costs 10."""
        assert funding_cost(1.0, 0.0, ten_year_table, "deterministic_term") == pytest.approx(10.0)

    def test_fair_life_survival_weighted(self, ten_year_table: MortalityTable) -> None:
        """With r = 0 the fair annuity costs the expected number of payments."""
        cost = funding_cost(1.0, 0.0, ten_year_table, FundingMode.FAIR_LIFE)
        assert cost == pytest.approx(float(np.sum(ten_year_table.survival_curve[:-1])))
        assert cost == pytest.approx(5.5)

    @pytest.mark.parametrize("r", [0.0, 0.027, 0.1])
    def test_fair_below_term(self, bundled_table: MortalityTable, r: float) -> None:
        """Life-contingent pricing never exceeds term pricing."""
        term = funding_cost(1.0, r, bundled_table, "deterministic_term")
        assert funding_cost(1.0, r, bundled_table, "fair_life") <= term

    def test_negative_level(self, ten_year_table: MortalityTable) -> None:
        """Negative income cannot be priced."""
        with pytest.raises(ValidationError):
            funding_cost(-1.0, 0.0, ten_year_table, "fair_life")

    def test_unknown_mode(self, ten_year_table: MortalityTable) -> None:
        """Only the two pricing modes exist."""
        with pytest.raises(ValueError):
            funding_cost(1.0, 0.0, ten_year_table, "loaded")

    def test_baseline_adequacy_cost(
        self, baseline_schedules: Schedules, bundled_table: MortalityTable
    ) -> None:
        """Fair pricing of the baseline adequacy level is close to 126,636."""
        x_al = adequacy_funding_cost(baseline_schedules, 0.027, bundled_table, "fair_life")
        assert x_al == pytest.approx(126636.0, rel=0.02)

    def test_baseline_term_cost_larger(
        self, baseline_schedules: Schedules, bundled_table: MortalityTable
    ) -> None:
        """Term pricing pays on every grid year and costs more."""
        fair = adequacy_funding_cost(baseline_schedules, 0.027, bundled_table, "fair_life")
        term = adequacy_funding_cost(baseline_schedules, 0.027, bundled_table, "deterministic_term")
        assert term > fair
