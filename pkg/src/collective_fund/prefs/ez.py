"""Homogeneous Epstein-Zin utility with mortality.

    Z_t = [gamma_t**rho + beta * E_t(Z_{t+dt}**alpha)**(rho/alpha)]**(1/rho)

The dead state contributes nothing to E_t(Z**alpha): its utility is 0
for alpha > 0 and infinite for alpha < 0, and inf**alpha = 0.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from collective_fund.errors import DomainError, ValidationError
from collective_fund.prefs.power import spow


@dataclass(frozen=True, eq=False)
class EZPreferences:
    """Homogeneous EZ preferences.

    Attributes:
        alpha: Monetary risk aversion exponent.
        rho: Satiation exponent.
        beta: Per-step discount factor in (0, 1].
    """

    alpha: float
    rho: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        for label, value in (("alpha", self.alpha), ("rho", self.rho)):
            if not value < 1.0 or value == 0.0:
                raise ValidationError(f"{label} must be < 1 and non-zero, got {value}")
        if not 0.0 < self.beta <= 1.0:
            raise ValidationError(f"beta must lie in (0, 1], got {self.beta}")

    @property
    def key(self) -> tuple[object, ...]:
        """Hashable identity for caches."""
        return ("ez", self.alpha, self.rho, self.beta)


def ez_deterministic_value(
    prefs: EZPreferences, stream: npt.ArrayLike, horizon: int | None = None
) -> float:
    """
    Z_0 = (sum_i beta**i * gamma_i**rho)**(1/rho) for a certain stream.

    Args:
        prefs: EZ preferences (alpha plays no role without risk).
        stream: Positive consumption per step.
        horizon: Number of steps to use; defaults to the stream length.

    Raises:
        DomainError: If any consumption used is not positive.
    """
    gamma = np.asarray(stream, dtype=np.float64)
    steps = gamma.size if horizon is None else horizon
    if steps < 1 or steps > gamma.size:
        raise ValidationError(f"horizon {steps} outside stream of length {gamma.size}")
    gamma = gamma[:steps]
    if np.any(gamma <= 0.0):
        raise DomainError("EZ utility needs strictly positive consumption")
    discounts = prefs.beta ** np.arange(steps, dtype=np.float64)
    return float(np.sum(discounts * gamma**prefs.rho) ** (1.0 / prefs.rho))


def ez_step(
    prefs: EZPreferences,
    gamma: float,
    survival: float,
    next_values: npt.ArrayLike,
    weights: npt.ArrayLike | None = None,
) -> float:
    """
    One application of the EZ recursion.

    Args:
        prefs: EZ preferences.
        gamma: Cashflow consumed this step (> 0).
        survival: Probability of being alive next step.
        next_values: Z_{t+dt} on the surviving branches.
        weights: Branch probabilities (uniform when omitted).

    Raises:
        DomainError: If gamma is not positive.
    """
    if not gamma > 0.0:
        raise DomainError(f"EZ utility needs gamma > 0, got {gamma}")
    z_next = np.asarray(next_values, dtype=np.float64)
    w = np.full(z_next.shape, 1.0 / z_next.size) if weights is None else np.asarray(weights)

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        moment = survival * float(np.dot(w, z_next**prefs.alpha)) if survival > 0.0 else 0.0
        # An empty future adds nothing, whatever the sign of rho/alpha.
        continuation = prefs.beta * moment ** (prefs.rho / prefs.alpha) if moment > 0.0 else 0.0
        return float((gamma**prefs.rho + continuation) ** (1.0 / prefs.rho))


def ez_satisfaction(prefs: EZPreferences, Z: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Signed power of Z: additive in consumption when alpha = rho."""
    return spow(prefs.rho, Z)
