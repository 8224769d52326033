"""Reproducible standard normal shocks with per-path substreams."""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np
import numpy.typing as npt

from collective_fund.errors import ValidationError


class Stream(IntEnum):
    """Independent random streams derived from one seed."""

    MARKET = 0
    DEATHS = 1
    POPULATION = 2


def substream(seed: int, stream: Stream, index: int) -> np.random.Generator:
    """
    Generator whose draws depend only on (seed, stream, index).

    Args:
        seed: Master seed.
        stream: Which kind of randomness.
        index: Path, simulation or member index.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, int(stream), index]))


@dataclass(frozen=True, eq=False)
class ShockMatrix:
    """Standard normal draws indexed (path, step)."""

    values: npt.NDArray[np.float64]
    seed: int

    @property
    def n_paths(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_steps(self) -> int:
        return int(self.values.shape[1])


def simulate_shocks(
    seed: int, n_paths: int, n_steps: int, stream: Stream = Stream.MARKET
) -> ShockMatrix:
    """
    I.i.d. standard normals; path i uses its own substream.

    Raises:
        ValidationError: If either size is below 1.
    """
    if n_paths < 1 or n_steps < 1:
        raise ValidationError(f"n_paths and n_steps must be at least 1, got {n_paths}, {n_steps}")
    values = np.empty((n_paths, n_steps))
    for i in range(n_paths):
        values[i] = substream(seed, stream, i).standard_normal(n_steps)
    values.setflags(write=False)
    return ShockMatrix(values=values, seed=seed)
