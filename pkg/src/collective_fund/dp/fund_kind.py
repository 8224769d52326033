"""Fund kinds and their per-survivor wealth dynamics."""

from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt
from scipy.stats import binom

from collective_fund.errors import ValidationError


class FundKindName(StrEnum):
    """Homogeneous fund structures."""

    INDIVIDUAL = "individual"
    COLLECTIVE_INFINITE = "collective_infinite"
    COLLECTIVE_FINITE = "collective_finite"


@dataclass(frozen=True)
class Outcomes:
    """Survivor outcomes for one step, conditional on the focal member surviving.

    Attributes:
        multipliers: Factor on (x - gamma * dt) * R for each outcome.
        probabilities: Outcome probabilities (sum to at most one after pruning).
        next_slices: Survivor-count slice index reached by each outcome.
    """

    multipliers: npt.NDArray[np.float64]
    probabilities: npt.NDArray[np.float64]
    next_slices: npt.NDArray[np.intp]


@dataclass(frozen=True)
class FundKind:
    """Individual, CollectiveInfinite or CollectiveFinite(n).

    Finite collectives carry one value slice per survivor count
    1..n; slice j holds j + 1 survivors.
    """

    name: FundKindName
    n: int | None = None

    def __post_init__(self) -> None:
        if self.name is FundKindName.COLLECTIVE_FINITE:
            if self.n is None or self.n < 1:
                raise ValidationError(f"finite collective needs n >= 1, got {self.n}")
        elif self.n is not None:
            raise ValidationError(f"{self.name} takes no member count")

    @classmethod
    def individual(cls) -> "FundKind":
        return cls(FundKindName.INDIVIDUAL)

    @classmethod
    def infinite(cls) -> "FundKind":
        return cls(FundKindName.COLLECTIVE_INFINITE)

    @classmethod
    def finite(cls, n: int, n_max: int | None = None) -> "FundKind":
        """Finite collective, routed to the infinite one above `n_max`."""
        if n_max is not None and n > n_max:
            return cls.infinite()
        return cls(FundKindName.COLLECTIVE_FINITE, n)

    @property
    def is_finite(self) -> bool:
        return self.name is FundKindName.COLLECTIVE_FINITE

    @property
    def n_slices(self) -> int:
        """Number of survivor-count slices in value and policy tables."""
        return self.n if self.is_finite and self.n is not None else 1

    @property
    def label(self) -> str:
        return f"{self.name}({self.n})" if self.is_finite else str(self.name)

    def slice_for(self, survivors: int) -> int:
        """Slice index for a current survivor count."""
        if not self.is_finite:
            return 0
        if not 1 <= survivors <= self.n_slices:
            raise ValidationError(f"survivor count {survivors} outside 1..{self.n_slices}")
        return survivors - 1

    def outcomes(self, survival: float, slice_index: int, cutoff: float = 0.0) -> Outcomes:
        """
        Wealth multipliers for the next step.

        Individual: x' = (x - gamma dt) R. Infinite collective: the
        deterministic mortality credit 1/s. Finite collective of m
        survivors: m / (B + 1) with B ~ Binomial(m - 1, s) other survivors.
        Outcomes with probability at or below `cutoff` are dropped.
        """
        if self.name is FundKindName.INDIVIDUAL or survival <= 0.0:
            return Outcomes(np.ones(1), np.ones(1), np.zeros(1, dtype=np.intp))
        if self.name is FundKindName.COLLECTIVE_INFINITE:
            return Outcomes(np.array([1.0 / survival]), np.ones(1), np.zeros(1, dtype=np.intp))

        members = slice_index + 1
        others = np.arange(members, dtype=np.intp)
        pmf = binom.pmf(others, members - 1, survival)
        keep = pmf > cutoff
        keep[int(np.argmax(pmf))] = True
        others = others[keep]
        return Outcomes(
            multipliers=members / (others + 1.0),
            probabilities=pmf[keep],
            next_slices=others,
        )
