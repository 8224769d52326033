"""Percentile fans of consumption over time."""

import warnings
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import pandas as pd

from collective_fund.errors import ValidationError

FloatArray = npt.NDArray[np.float64]

PERCENTILES = (5.0, 50.0, 95.0)


@dataclass(frozen=True, eq=False)
class FanStatistics:
    """5/50/95 percentile curves over the living, plus one sample path.

    Attributes:
        p5: 5th percentile per grid time.
        p50: Median per grid time.
        p95: 95th percentile per grid time.
        sample: Path 0, NaN where that member is dead.
        n_in_sample: Paths contributing at each time.
    """

    p5: FloatArray
    p50: FloatArray
    p95: FloatArray
    sample: FloatArray
    n_in_sample: npt.NDArray[np.intp]


def fan_statistics(consumption_paths: npt.ArrayLike, alive_weights: npt.ArrayLike) -> FanStatistics:
    """
    Percentiles at each time over the paths on which the member is alive.

    Percentiles interpolate linearly between order statistics.

    Args:
        consumption_paths: Shape (n_paths, n_steps).
        alive_weights: Positive where the member is alive; broadcast
            against the paths.

    Raises:
        ValidationError: With fewer than two paths.
    """
    c = np.asarray(consumption_paths, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] < 2:
        raise ValidationError("fan statistics need at least two paths")
    alive = np.broadcast_to(np.asarray(alive_weights) > 0.0, c.shape)
    masked = np.where(alive, c, np.nan)
    with warnings.catch_warnings():
        # Times where nobody is alive give NaN.
        warnings.simplefilter("ignore", category=RuntimeWarning)
        p5, p50, p95 = np.nanpercentile(masked, PERCENTILES, axis=0)
    return FanStatistics(
        p5=p5,
        p50=p50,
        p95=p95,
        sample=masked[0].copy(),
        n_in_sample=np.count_nonzero(alive, axis=0),
    )


def fan_frame(stats: FanStatistics, t_grid: FloatArray) -> pd.DataFrame:
    """Columns `t,p5,p50,p95,sample`."""
    return pd.DataFrame(
        {"t": t_grid, "p5": stats.p5, "p50": stats.p50, "p95": stats.p95, "sample": stats.sample}
    )


def reference_frame(t_grid: FloatArray, adequacy: FloatArray, payout: float) -> pd.DataFrame:
    """Columns `t,adequacy,annuity`: the adequacy level and a flat annuity payout."""
    return pd.DataFrame(
        {"t": t_grid, "adequacy": adequacy, "annuity": np.full(np.shape(t_grid), payout)}
    )
