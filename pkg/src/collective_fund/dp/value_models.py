"""Per-family pieces of the backward recursion.

Both families are written as value = flow(gamma) + continuation, so the
same optimiser serves them:

- KM values are satisfaction equivalents z = -log(-W) and
  continuation = -log((1 - s) + s E[exp(-z')]), the log form of
  W = exp(-u dt) [-(1 - s) + s E[W']].
- vNM values are expected utilities and continuation = beta s E[V'].

Interpolation happens in a coordinate where values are smooth and
monotone: z against log-wealth for KM, and |V|**(1/rho) against wealth
for vNM, which is exactly linear for power utility.
"""

from abc import ABC, abstractmethod

import numpy as np
import numpy.typing as npt
from scipy.special import logsumexp

from collective_fund.errors import ConfigurationError
from collective_fund.prefs.km import KMPreferences, gain_from_satisfaction
from collective_fund.prefs.power import inverse_spow, spow
from collective_fund.prefs.vnm import VNMPreferences

FloatArray = npt.NDArray[np.float64]


class ValueModel(ABC):
    """Family-specific flow, continuation and interpolation coordinate."""

    # Whether lookups beyond the grid extend linearly (True) or clamp (False).
    extrapolate: bool = False

    @abstractmethod
    def flow(self, gamma: FloatArray, t_index: int) -> FloatArray:
        """Value accrued by consuming at rate gamma for one step."""

    @abstractmethod
    def continuation(self, next_values: FloatArray, weights: FloatArray, s: float) -> FloatArray:
        """Continuation term from next-step values over the last axis."""

    @abstractmethod
    def abscissa(self, x: FloatArray) -> FloatArray:
        """Interpolation abscissa for wealth x."""

    @abstractmethod
    def to_coordinate(self, values: FloatArray) -> FloatArray:
        """Map values into the interpolation coordinate."""

    @abstractmethod
    def from_coordinate(self, y: FloatArray) -> FloatArray:
        """Inverse of `to_coordinate`."""

    @abstractmethod
    def gain(self, values: FloatArray) -> FloatArray:
        """Values in the family's gain units."""

    @abstractmethod
    def from_gain(self, gains: FloatArray) -> FloatArray:
        """Inverse of `gain`."""


class KMValueModel(ValueModel):
    """Exponential KM: values are satisfaction equivalents."""

    extrapolate = False

    def __init__(self, prefs: KMPreferences) -> None:
        self.prefs = prefs

    def flow(self, gamma: FloatArray, t_index: int) -> FloatArray:
        return self.prefs.flow(gamma, t_index)

    def continuation(self, next_values: FloatArray, weights: FloatArray, s: float) -> FloatArray:
        if s <= 0.0:
            return np.zeros(next_values.shape[:-1])
        shape = next_values.shape[:-1] + (1,)
        exponents = np.concatenate([np.zeros(shape), -next_values], axis=-1)
        scale = np.concatenate([[1.0 - s], s * np.asarray(weights)])
        with np.errstate(over="ignore", invalid="ignore"):
            return -np.asarray(logsumexp(exponents, axis=-1, b=scale))

    def abscissa(self, x: FloatArray) -> FloatArray:
        return np.log(x)

    def to_coordinate(self, values: FloatArray) -> FloatArray:
        return values

    def from_coordinate(self, y: FloatArray) -> FloatArray:
        return y

    def gain(self, values: FloatArray) -> FloatArray:
        return gain_from_satisfaction(values)

    def from_gain(self, gains: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore"):
            return -np.log(-np.asarray(gains, dtype=np.float64))


class VNMValueModel(ValueModel):
    """Additive power utility: values are expected utilities."""

    extrapolate = True

    def __init__(self, prefs: VNMPreferences) -> None:
        self.prefs = prefs

    def flow(self, gamma: FloatArray, t_index: int) -> FloatArray:
        return self.prefs.flow(gamma, t_index)

    def continuation(self, next_values: FloatArray, weights: FloatArray, s: float) -> FloatArray:
        if s <= 0.0:
            return np.zeros(next_values.shape[:-1])
        with np.errstate(invalid="ignore"):
            expected = np.tensordot(next_values, np.asarray(weights), axes=([-1], [0]))
        return self.prefs.beta * s * expected

    def abscissa(self, x: FloatArray) -> FloatArray:
        return x

    def to_coordinate(self, values: FloatArray) -> FloatArray:
        return inverse_spow(self.prefs.rho, values)

    def from_coordinate(self, y: FloatArray) -> FloatArray:
        return spow(self.prefs.rho, y)

    def gain(self, values: FloatArray) -> FloatArray:
        return np.asarray(values, dtype=np.float64)

    def from_gain(self, gains: FloatArray) -> FloatArray:
        return np.asarray(gains, dtype=np.float64)


def value_model_for(prefs: KMPreferences | VNMPreferences) -> ValueModel:
    """
    Value model matching a preference family.

    Raises:
        ConfigurationError: For families the grid solver does not handle.
    """
    if isinstance(prefs, KMPreferences):
        return KMValueModel(prefs)
    if isinstance(prefs, VNMPreferences):
        return VNMValueModel(prefs)
    raise ConfigurationError(f"grid solver does not support {type(prefs).__name__}")
