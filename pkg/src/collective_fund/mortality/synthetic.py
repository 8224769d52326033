"""Synthetic Gompertz-Makeham mortality tables."""

import math

import numpy as np

from collective_fund.errors import ValidationError
from collective_fund.mortality.table import MortalityTable, truncate_tail


def _cumulative_hazard(
    A: float, B: float, c: float, age: float, t: np.ndarray
) -> np.ndarray:
    if c == 1.0:
        return (A + B) * t
    log_c = math.log(c)
    return A * t + B * c**age * np.expm1(t * log_c) / log_c


def gompertz_makeham_table(
    A: float,
    B: float,
    c: float,
    dt: float = 1.0,
    horizon: float = 60.0,
    age: float = 0.0,
    name: str | None = None,
) -> MortalityTable:
    """
    Death masses for the hazard h(t) = A + B * c**(age + t).

    The mass beyond the horizon is placed on the last grid point.

    Args:
        A: Constant (Makeham) hazard per year.
        B: Gompertz hazard per year at age 0 of the clock.
        c: Gompertz growth factor per year.
        dt: Years per step.
        horizon: Years covered by the grid.
        age: Age added to the Gompertz clock.
        name: Optional label.

    Raises:
        ValidationError: On negative parameters, c < 1, an all-zero
            hazard, or a horizon shorter than one step.
    """
    if A < 0.0 or B < 0.0:
        raise ValidationError("hazard parameters A and B must be non-negative")
    if c < 1.0:
        raise ValidationError(f"growth factor c must be >= 1, got {c}")
    if A == 0.0 and B == 0.0:
        raise ValidationError("hazard is identically zero")
    if dt <= 0.0:
        raise ValidationError(f"dt must be positive, got {dt}")

    n_steps = round(horizon / dt)
    if n_steps < 1:
        raise ValidationError(f"horizon {horizon} shorter than one step of {dt}")

    times = np.arange(n_steps, dtype=np.float64) * dt
    survival = np.exp(-_cumulative_hazard(A, B, c, age, times))
    p = np.empty(n_steps)
    p[:-1] = survival[:-1] - survival[1:]
    p[-1] = survival[-1]
    label = name or f"gompertz(A={A:g},B={B:g},c={c:g},age={age:g})"
    return MortalityTable(p=p, dt=dt, name=label)


def gompertz_cohort_table(
    modal_age: float,
    growth: float,
    age: float,
    dt: float = 1.0,
    max_age: float = 125.0,
    eps: float = 1e-5,
    name: str | None = None,
) -> MortalityTable:
    """
    Gompertz cohort table for a member retiring at `age`.

    The Gompertz density of the age at death peaks at `modal_age`,
    which fixes B = ln(growth) / growth**modal_age.

    Raises:
        ValidationError: If max_age does not exceed age.
    """
    if max_age <= age:
        raise ValidationError(f"max_age {max_age} must exceed retirement age {age}")
    B = math.log(growth) / growth**modal_age
    table = gompertz_makeham_table(
        0.0,
        B,
        growth,
        dt=dt,
        horizon=max_age - age,
        age=age,
        name=name or f"gompertz(modal={modal_age:g},age={age:g})",
    )
    return truncate_tail(table, eps)
