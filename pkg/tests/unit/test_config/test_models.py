"""Tests for configuration models."""

import pytest
from pydantic import ValidationError

from collective_fund.config.models import (
    Config,
    EZConfig,
    GridConfig,
    MarketConfig,
    MortalityConfig,
    PopulationConfig,
    PreferencesConfig,
)


class TestDefaults:
    """Test the baseline defaults."""

    def test_market(self) -> None:
        market = MarketConfig()
        assert (market.r, market.mu, market.sigma) == (0.027, 0.062, 0.15)

    def test_preferences(self) -> None:
        prefs = PreferencesConfig()
        assert prefs.rho == -1.0
        assert prefs.lambda_ == 1.0
        assert prefs.sp0 == 6718.0
        assert prefs.total_adequacy == 16800.0

    def test_root(self) -> None:
        config = Config()
        assert config.threads == 0
        assert config.grid.n_wealth == 400
        assert config.population.n == 100
        assert config.population.retirement_age_range == (60, 69)


class TestMortalityConfig:
    """Test table source selection."""

    def test_bundled_name(self) -> None:
        assert MortalityConfig().is_bundled

    def test_csv_path(self) -> None:
        assert not MortalityConfig(table="tables/female.csv").is_bundled


class TestMarketConfig:
    """Test market validation."""

    @pytest.mark.parametrize("field", ["r", "mu", "sigma"])
    def test_rejects_non_finite(self, field: str) -> None:
        with pytest.raises(ValidationError):
            MarketConfig(**{field: float("inf")})

    def test_sigma_positive(self) -> None:
        with pytest.raises(ValidationError):
            MarketConfig(sigma=0.0)

    def test_frozen(self) -> None:
        market = MarketConfig()
        with pytest.raises(ValidationError):
            market.r = 0.05  # type: ignore[misc]


class TestPreferencesConfig:
    """Test preference validation."""

    def test_lambda_alias(self) -> None:
        """Files spell the key `lambda`; code uses `lambda_`."""
        assert PreferencesConfig(**{"lambda": 3.0}).lambda_ == 3.0
        assert PreferencesConfig(lambda_=3.0).lambda_ == 3.0

    @pytest.mark.parametrize("rho", [0.0, 1.0, 1.5])
    def test_rho_range(self, rho: float) -> None:
        with pytest.raises(ValidationError):
            PreferencesConfig(rho=rho)

    def test_unknown_family(self) -> None:
        with pytest.raises(ValidationError):
            PreferencesConfig(family="crra")  # type: ignore[arg-type]

    def test_ez_exponents(self) -> None:
        with pytest.raises(ValidationError):
            EZConfig(alpha=0.0)
        with pytest.raises(ValidationError):
            EZConfig(beta=1.5)


class TestGridConfig:
    """Test grid validation and resolution."""

    def test_resolve_from_multiples(self) -> None:
        grid = GridConfig().resolve(1000.0)
        assert grid.wealth_min == pytest.approx(10.0)
        assert grid.wealth_max == pytest.approx(50_000.0)

    def test_resolve_keeps_explicit_bounds(self) -> None:
        grid = GridConfig(wealth_min=5.0, wealth_max=500.0).resolve(1000.0)
        assert (grid.wealth_min, grid.wealth_max) == (5.0, 500.0)

    def test_wealth_bounds_ordered(self) -> None:
        with pytest.raises(ValidationError):
            GridConfig(wealth_min=10.0, wealth_max=5.0)

    def test_pi_bounds_ordered(self) -> None:
        with pytest.raises(ValidationError):
            GridConfig(pi_bounds=(1.0, 0.0))

    def test_minimum_wealth_nodes(self) -> None:
        with pytest.raises(ValidationError):
            GridConfig(n_wealth=8)


class TestPopulationConfig:
    """Test population recipe validation."""

    def test_ranges_ordered(self) -> None:
        with pytest.raises(ValidationError):
            PopulationConfig(power_range=(-0.5, -1.5))

    def test_ages_ordered(self) -> None:
        with pytest.raises(ValidationError):
            PopulationConfig(retirement_age_range=(70, 60))


class TestEnvironmentOverrides:
    """Test COLLECTIVE_FUND_ environment variables."""

    def test_nested_override(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("COLLECTIVE_FUND_MARKET__R", "0.01")
        assert Config().market.r == 0.01

    def test_threads_override(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("COLLECTIVE_FUND_THREADS", "3")
        assert Config().threads == 3

    def test_unknown_section_rejected(self) -> None:
        with pytest.raises(ValidationError):
            Config(storage={})  # type: ignore[call-arg]
