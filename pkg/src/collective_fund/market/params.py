"""Real-terms Black-Scholes-Merton market."""

import math

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator

from collective_fund.errors import ValidationError


class MarketParams(BaseModel):
    """Risk-free rate r, risky drift mu and volatility sigma, all real and per year."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    r: float
    mu: float
    sigma: float = Field(gt=0.0)

    @field_validator("r", "mu", "sigma")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        """Reject NaN and infinite parameters."""
        if not math.isfinite(v):
            raise ValueError("market parameters must be finite")
        return v

    @property
    def key(self) -> tuple[float, float, float]:
        """Hashable identity for caches."""
        return (self.r, self.mu, self.sigma)


def log_return_params(
    mp: MarketParams, pi: float | npt.ArrayLike, dt: float
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Mean and standard deviation of the one-step log return.

    A fraction `pi` of wealth is held in the risky asset, rebalanced
    continuously within the step, so the gross return is lognormal.

    Args:
        mp: Market parameters.
        pi: Risky weight (scalar or array).
        dt: Step length in years.

    Returns:
        (mean, sd), broadcast to the shape of `pi`.

    Raises:
        ValidationError: If dt is not positive.
    """
    if dt <= 0.0:
        raise ValidationError(f"dt must be positive, got {dt}")
    weight = np.asarray(pi, dtype=np.float64)
    mean = (mp.r + weight * (mp.mu - mp.r) - 0.5 * weight**2 * mp.sigma**2) * dt
    sd = np.abs(weight) * mp.sigma * math.sqrt(dt)
    return mean, sd


def realized_returns(
    mp: MarketParams, pi: npt.ArrayLike, dt: float, shocks: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """
    Gross returns for standard normal shocks.

    The exposure is signed (pi * sigma * sqrt(dt) * Z), so one shock
    drives every weight consistently.
    """
    weight = np.asarray(pi, dtype=np.float64)
    mean, _ = log_return_params(mp, weight, dt)
    exposure = weight * mp.sigma * math.sqrt(dt)
    return np.exp(mean + exposure * np.asarray(shocks, dtype=np.float64))
