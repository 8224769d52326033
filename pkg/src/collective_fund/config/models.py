"""Pydantic configuration models for collective fund experiments.

All rates are real (net of inflation). Money is in pounds, time in years.
"""

import math
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_STRICT = ConfigDict(extra="forbid", frozen=True)


class MortalityConfig(BaseModel):
    """Mortality table source."""

    model_config = _STRICT

    # Bundled table name, or a path to a `t,p` CSV file.
    table: str = "cmi2018f_15"
    truncation_eps: float = Field(default=1e-5, gt=0.0, lt=1.0)

    @property
    def is_bundled(self) -> bool:
        """True when `table` names a packaged table rather than a file."""
        return not self.table.endswith(".csv")


class MarketConfig(BaseModel):
    """Black-Scholes-Merton market, real terms."""

    model_config = _STRICT

    r: float = 0.027
    mu: float = 0.062
    sigma: float = Field(default=0.15, gt=0.0)

    @field_validator("r", "mu", "sigma")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        """Reject NaN and infinite rates."""
        if not math.isfinite(v):
            raise ValueError("market parameters must be finite")
        return v


class EZConfig(BaseModel):
    """Homogeneous Epstein-Zin parameters."""

    model_config = _STRICT

    alpha: float = Field(default=-1.0, lt=1.0)
    rho: float = Field(default=-1.0, lt=1.0)
    beta: float = Field(default=1.0, gt=0.0, le=1.0)

    @field_validator("alpha", "rho")
    @classmethod
    def validate_nonzero(cls, v: float) -> float:
        """Exponents of zero are excluded."""
        if v == 0.0:
            raise ValueError("exponent must be non-zero")
        return v


class PreferencesConfig(BaseModel):
    """Preference family and parameters."""

    family: Literal["km", "vnm", "ez"] = "km"
    rho: float = Field(default=-1.0, lt=1.0)
    lambda_: float = Field(default=1.0, gt=0.0, alias="lambda")
    sp0: float = Field(default=6718.0, ge=0.0)
    r_tl: float = 0.027
    total_adequacy: float = Field(default=16800.0, ge=0.0)
    vnm_beta: float = Field(default=1.0, gt=0.0, le=1.0)
    ez: EZConfig = Field(default_factory=EZConfig)

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    @field_validator("rho")
    @classmethod
    def validate_rho(cls, v: float) -> float:
        """Satiation exponent must be non-zero."""
        if v == 0.0:
            raise ValueError("rho must be non-zero")
        return v


class PricingConfig(BaseModel):
    """How deterministic pensions and annuities are priced."""

    model_config = _STRICT

    x_al_mode: Literal["deterministic_term", "fair_life"] = "fair_life"
    annuity_mode: Literal["deterministic_term", "fair_life"] = "fair_life"


class BudgetConfig(BaseModel):
    """Initial wealth X0."""

    model_config = _STRICT

    # Explicit budget in pounds; when null, x0 = x_al_multiple * X_AL.
    x0: float | None = Field(default=None, gt=0.0)
    x_al_multiple: float = Field(default=1.0, gt=0.0)


class GridConfig(BaseModel):
    """Dynamic programming grid and one-step search resolution."""

    model_config = _STRICT

    wealth_min: float | None = Field(default=None, gt=0.0)
    wealth_max: float | None = Field(default=None, gt=0.0)
    # Bounds relative to X0 when wealth_min/wealth_max are not given.
    min_multiple: float = Field(default=0.01, gt=0.0)
    max_multiple: float = Field(default=50.0, gt=0.0)
    n_wealth: int = Field(default=400, ge=16, le=20000)
    spacing: Literal["log", "linear"] = "log"
    n_consumption: int = Field(default=41, ge=3, le=10001)
    n_pi: int = Field(default=11, ge=1, le=1001)
    pi_bounds: tuple[float, float] = (0.0, 1.0)
    quadrature_K: int = Field(default=9, ge=1, le=64)
    refine: bool = True
    tolerance: float = Field(default=1e-8, gt=0.0, lt=1e-2)
    binomial_cutoff: float = Field(default=1e-15, ge=0.0, lt=1e-3)
    n_max: int = Field(default=50, ge=1, le=1000)

    @field_validator("pi_bounds")
    @classmethod
    def validate_pi_bounds(cls, v: tuple[float, float]) -> tuple[float, float]:
        """Bounds must be ordered."""
        if v[0] > v[1]:
            raise ValueError("pi_bounds must satisfy low <= high")
        return v

    @model_validator(mode="after")
    def validate_wealth_range(self) -> "GridConfig":
        """Explicit wealth bounds must be ordered."""
        if (
            self.wealth_min is not None
            and self.wealth_max is not None
            and self.wealth_min >= self.wealth_max
        ):
            raise ValueError("wealth_min must be below wealth_max")
        return self

    def resolve(self, x0: float) -> "GridConfig":
        """Return a copy with explicit wealth bounds around budget `x0`."""
        return self.model_copy(
            update={
                "wealth_min": self.wealth_min or x0 * self.min_multiple,
                "wealth_max": self.wealth_max or x0 * self.max_multiple,
            }
        )


class FundConfig(BaseModel):
    """Fund kind used by `solve`, `evaluate` and `fan`."""

    model_config = _STRICT

    kinds: list[Literal["annuity", "individual", "collective_infinite", "collective_finite"]] = (
        Field(default_factory=lambda: ["annuity", "individual", "collective_infinite"])
    )
    n: int = Field(default=10, ge=1)


class SimulationConfig(BaseModel):
    """Monte Carlo settings for fans and evaluations."""

    model_config = _STRICT

    seed: int = Field(default=20190101, ge=0)
    paths: int = Field(default=10_000, ge=2)


class CohortMortalityConfig(BaseModel):
    """Gompertz cohort tables for the heterogeneous population."""

    model_config = _STRICT

    female_modal_age: float = Field(default=91.25, gt=0.0)
    male_modal_age: float = Field(default=88.5, gt=0.0)
    growth: float = Field(default=1.11, gt=1.0)
    max_age: float = Field(default=125.0, gt=0.0)


class PopulationConfig(BaseModel):
    """Heterogeneous fund population recipe."""

    model_config = _STRICT

    n: int = Field(default=100, ge=1)
    power_range: tuple[float, float] = (-1.5, -0.5)
    wealth_range: tuple[float, float] = (0.5, 1.5)
    retirement_age_range: tuple[int, int] = (60, 69)
    sex_split: float = Field(default=0.5, ge=0.0, le=1.0)
    seed: int = Field(default=7, ge=0)
    sims: int = Field(default=10_000, ge=1)
    control_variate: bool = True
    cohort: CohortMortalityConfig = Field(default_factory=CohortMortalityConfig)

    @field_validator("power_range", "wealth_range")
    @classmethod
    def validate_range(cls, v: tuple[float, float]) -> tuple[float, float]:
        """Ranges must be ordered."""
        if v[0] > v[1]:
            raise ValueError("range must satisfy low <= high")
        return v

    @field_validator("retirement_age_range")
    @classmethod
    def validate_ages(cls, v: tuple[int, int]) -> tuple[int, int]:
        """Age range must be ordered and non-negative."""
        if v[0] > v[1] or v[0] < 0:
            raise ValueError("retirement_age_range must satisfy 0 <= low <= high")
        return v


class LoggingConfig(BaseModel):
    """Logging configuration for loguru."""

    model_config = _STRICT

    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    format: Literal["console", "json"] = "console"
    file: Path | None = None
    rotation: str = "10 MB"
    retention: str = "7 days"


class OutputConfig(BaseModel):
    """Where CSVs are written."""

    model_config = _STRICT

    out_dir: Path = Path("results")


class Config(BaseSettings):
    """Root configuration for collective fund experiments."""

    mortality: MortalityConfig = Field(default_factory=MortalityConfig)
    market: MarketConfig = Field(default_factory=MarketConfig)
    preferences: PreferencesConfig = Field(default_factory=PreferencesConfig)
    pricing: PricingConfig = Field(default_factory=PricingConfig)
    budget: BudgetConfig = Field(default_factory=BudgetConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    fund: FundConfig = Field(default_factory=FundConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    population: PopulationConfig = Field(default_factory=PopulationConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    # Worker cap for thread pools; 0 means one per CPU.
    threads: int = Field(default=0, ge=0)

    model_config = SettingsConfigDict(
        env_prefix="COLLECTIVE_FUND_",
        env_nested_delimiter="__",
        extra="forbid",
    )

    def to_yaml_dict(self) -> dict[str, Any]:
        """Plain data suitable for `yaml.safe_dump`, using file aliases."""
        return self.model_dump(mode="json", by_alias=True)
