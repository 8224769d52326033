"""Inter-temporally additive power-utility preferences with mortality."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from collective_fund.errors import ValidationError
from collective_fund.prefs.ez import EZPreferences
from collective_fund.prefs.power import spow


@dataclass(frozen=True, eq=False)
class VNMPreferences:
    """Gain E[sum_{t <= tau} beta**t * spow(rho, gamma_t) * dt]; death adds nothing.

    Attributes:
        rho: Power exponent, rho < 1 and rho != 0.
        beta: Per-step discount factor in (0, 1]; 1 means undiscounted.
        dt: Years per step.
    """

    rho: float
    beta: float = 1.0
    dt: float = 1.0

    def __post_init__(self) -> None:
        if not self.rho < 1.0 or self.rho == 0.0:
            raise ValidationError(f"rho must be < 1 and non-zero, got {self.rho}")
        if not 0.0 < self.beta <= 1.0:
            raise ValidationError(f"beta must lie in (0, 1], got {self.beta}")
        if self.dt <= 0.0:
            raise ValidationError(f"dt must be positive, got {self.dt}")

    @property
    def key(self) -> tuple[object, ...]:
        """Hashable identity for caches."""
        return ("vnm", self.rho, self.beta, self.dt)

    def utility(self, gamma: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """spow(rho, gamma); -inf (rho < 0) or 0 (rho > 0) at zero consumption."""
        g = np.asarray(gamma, dtype=np.float64)
        return np.where(g < 0.0, -np.inf, spow(self.rho, g))

    def flow(self, gamma: npt.ArrayLike, index: int) -> npt.NDArray[np.float64]:  # noqa: ARG002
        """Utility accrued over one step (time-homogeneous)."""
        return self.utility(gamma) * self.dt

    def as_epstein_zin(self) -> EZPreferences:
        """The EZ preferences with alpha = rho, which order streams identically."""
        return EZPreferences(alpha=self.rho, rho=self.rho, beta=self.beta)
