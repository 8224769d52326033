"""Exponential Kihlstrom-Mirman preferences with state pension and adequacy level.

Satisfaction of a consumption stream gamma until death at tau is

    s = sum_{t <= tau} u(gamma_t, t) * dt,
    u(gamma, t) = a (gamma + SP_t)**rho - a (AL_t + SP_t)**rho,

and the gain is E[-exp(-s)]. The solver works with the satisfaction
equivalent z = -log(-gain), which stays finite where exp overflows.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.special import logsumexp

from collective_fund.errors import CalibrationError, ValidationError
from collective_fund.prefs.schedules import Schedules


@dataclass(frozen=True, eq=False)
class KMPreferences:
    """Exponential KM preferences.

    Attributes:
        rho: Satiation exponent, rho < 1 and rho != 0.
        a: Scale with the sign of rho.
        schedules: State pension and adequacy schedules.
    """

    rho: float
    a: float
    schedules: Schedules

    def __post_init__(self) -> None:
        if not self.rho < 1.0 or self.rho == 0.0:
            raise ValidationError(f"rho must be < 1 and non-zero, got {self.rho}")
        if not self.a * self.rho > 0.0:
            raise ValidationError(f"scale a={self.a} must share the sign of rho={self.rho}")

    @classmethod
    def calibrated(cls, rho: float, lambda_: float, schedules: Schedules) -> "KMPreferences":
        """Preferences whose scale reproduces the satisfaction-risk-aversion `lambda_`."""
        return cls(rho=rho, a=calibrate_a(lambda_, rho, schedules), schedules=schedules)

    @property
    def dt(self) -> float:
        return self.schedules.dt

    @property
    def n_steps(self) -> int:
        return int(self.schedules.t_grid.size)

    @property
    def key(self) -> tuple[object, ...]:
        """Hashable identity for caches."""
        return ("km", self.rho, self.a, self.schedules.key)

    def utility_at(self, gamma: npt.ArrayLike, index: int) -> npt.NDArray[np.float64]:
        """Vectorised u(gamma, t) at grid index `index`; -inf for gamma < 0."""
        sp = self.schedules.state_pension[index]
        al = self.schedules.adequacy[index]
        g = np.asarray(gamma, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            level = self.a * np.power(np.maximum(g, 0.0) + sp, self.rho)
            reference = self.a * np.power(al + sp, self.rho)
        return np.where(g < 0.0, -np.inf, level - reference)

    def flow(self, gamma: npt.ArrayLike, index: int) -> npt.NDArray[np.float64]:
        """Satisfaction accrued over one step: u(gamma, t) * dt."""
        return self.utility_at(gamma, index) * self.dt


def utility_u(prefs: KMPreferences, gamma: float, t: float) -> float:
    """
    u(gamma, t) = a (gamma + SP_t)**rho - a (AL_t + SP_t)**rho.

    Returns -inf for negative consumption.

    Raises:
        DomainError: If t is not a grid time.
    """
    index = prefs.schedules.index_of(t)
    return float(prefs.utility_at(gamma, index))


def satisfaction(prefs: KMPreferences, stream: npt.ArrayLike, tau: float) -> float:
    """
    Sum of u(gamma_t, t) * dt over grid times t <= tau.

    Args:
        prefs: KM preferences.
        stream: Consumption rate per grid time, at least up to tau.
        tau: Death time in years; must be a grid time.

    Returns:
        Satisfaction; -inf if any in-life consumption is negative.

    Raises:
        DomainError: If tau is not a grid time.
        ValidationError: If the stream ends before tau.
    """
    last = prefs.schedules.index_of(tau)
    gamma = np.asarray(stream, dtype=np.float64)
    if last >= gamma.size:
        raise ValidationError(f"stream does not cover death time tau={tau}")
    total = 0.0
    for index in range(last + 1):
        total += float(prefs.flow(gamma[index], index))
    return total


def satisfaction_equivalent(gain: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """z = -log(-gain); the satisfaction whose certain receipt yields `gain`."""
    with np.errstate(divide="ignore"):
        return -np.log(-np.asarray(gain, dtype=np.float64))


def gain_from_satisfaction(z: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """gain = -exp(-z)."""
    with np.errstate(over="ignore"):
        return -np.exp(-np.asarray(z, dtype=np.float64))


def km_gain(samples: npt.ArrayLike) -> tuple[float, float]:
    """
    Sample mean of -exp(-s) and its standard error.

    The mean is formed in log space, so large negative satisfactions
    overflow only in the final exponentiation.

    Raises:
        ValidationError: On empty input.
    """
    s = np.asarray(samples, dtype=np.float64).ravel()
    if s.size == 0:
        raise ValidationError("km_gain needs at least one sample")
    if np.any(s == -np.inf):
        return -np.inf, np.inf

    log_mean = float(logsumexp(-s)) - np.log(s.size)
    with np.errstate(over="ignore"):
        mean = -float(np.exp(log_mean))
        if s.size == 1:
            return mean, 0.0
        values = -np.exp(-s)
    se = float(np.std(values, ddof=1) / np.sqrt(s.size)) if np.all(np.isfinite(values)) else np.inf
    return mean, se


def calibrate_a(lambda_: float, rho: float, schedules: Schedules) -> float:
    """
    Scale `a` making the directional derivative of satisfaction equal `lambda_`.

    The derivative is taken at the deterministic stream max(AL_t, 0) in
    its own direction, over the whole grid:
    a = lambda / sum_t rho * AL_t * (AL_t + SP_t)**(rho - 1) * dt.

    Raises:
        ValidationError: If lambda is not positive.
        CalibrationError: If the floored adequacy level is identically zero.
    """
    if not lambda_ > 0.0:
        raise ValidationError(f"lambda must be positive, got {lambda_}")
    floor = schedules.adequacy_floor
    active = floor > 0.0
    if not np.any(active):
        raise CalibrationError("adequacy level is zero on the whole grid; lambda is undefined")

    level = floor[active]
    sp = schedules.state_pension[active]
    denominator = float(np.sum(rho * level * np.power(level + sp, rho - 1.0)) * schedules.dt)
    return lambda_ / denominator
