"""Signed power function."""

import numpy as np
import numpy.typing as npt

from collective_fund.errors import DomainError, ValidationError


def spow(exponent: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """
    Vectorised signed power without domain checks.

    Non-positive x maps to the limit as x -> 0+ (0 for g > 0, -inf for g < 0).
    """
    values = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        powered = np.power(np.maximum(values, 0.0), exponent)
    return powered if exponent > 0.0 else -powered


def signed_power(exponent: float, x: float) -> float:
    """
    x**g for g > 0 and -x**g for g < 0; increasing in x for every g.

    Raises:
        ValidationError: If the exponent is zero.
        DomainError: If x is not positive.
    """
    if exponent == 0.0:
        raise ValidationError("signed power exponent must be non-zero")
    if not x > 0.0:
        raise DomainError(f"signed power needs x > 0, got {x}")
    return float(spow(exponent, x))


def inverse_spow(exponent: float, y: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Inverse of `spow`; values outside its range map to 0 or inf."""
    values = np.asarray(y, dtype=np.float64)
    magnitude = values if exponent > 0.0 else -values
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.power(np.maximum(magnitude, 0.0), 1.0 / exponent)
