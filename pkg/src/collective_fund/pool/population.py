"""Random heterogeneous fund populations."""

from collections.abc import Mapping
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from collective_fund.errors import ConfigurationError, ValidationError
from collective_fund.market.shocks import Stream, substream
from collective_fund.mortality.synthetic import gompertz_cohort_table
from collective_fund.mortality.table import MortalityTable
from collective_fund.prefs.km import KMPreferences
from collective_fund.prefs.vnm import VNMPreferences


class Sex(StrEnum):
    """Sex used to pick a cohort mortality table."""

    FEMALE = "female"
    MALE = "male"


@dataclass(frozen=True, eq=False)
class Member:
    """One fund member.

    Attributes:
        id: Member identifier.
        prefs: Preferences of the member.
        table: Mortality from the member's retirement onwards.
        wealth: Initial account value.
        sex: Sex drawn for the member.
        retirement_age: Age at t = 0.
        alive: Whether the member is alive at t = 0.
    """

    id: int
    prefs: VNMPreferences | KMPreferences
    table: MortalityTable
    wealth: float
    sex: Sex = Sex.FEMALE
    retirement_age: int = 65
    alive: bool = True

    def __post_init__(self) -> None:
        if self.wealth < 0.0:
            raise ValidationError(f"member {self.id} has negative wealth {self.wealth}")


@dataclass(frozen=True)
class PopulationSpec:
    """How a random population is drawn.

    Attributes:
        n: Member count.
        power_range: Range of the vNM power rho.
        wealth_range: Range of initial wealth.
        retirement_age_range: Inclusive integer range of retirement ages.
        sex_split: Probability a member is female.
        seed: Seed of the POPULATION substream.
    """

    n: int = 100
    power_range: tuple[float, float] = (-1.5, -0.5)
    wealth_range: tuple[float, float] = (0.5, 1.5)
    retirement_age_range: tuple[int, int] = (60, 69)
    sex_split: float = 0.5
    seed: int = 7

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"population needs at least one member, got {self.n}")
        lo, hi = self.power_range
        if not lo <= hi < 1.0 or lo <= 0.0 <= hi:
            raise ValidationError(f"power range {self.power_range} must exclude 0 and 1")
        if not 0.0 < self.wealth_range[0] <= self.wealth_range[1]:
            raise ValidationError(f"wealth range {self.wealth_range} must be positive")
        if self.retirement_age_range[0] > self.retirement_age_range[1]:
            raise ValidationError(f"age range {self.retirement_age_range} is empty")
        if not 0.0 <= self.sex_split <= 1.0:
            raise ValidationError(f"sex split {self.sex_split} outside [0, 1]")


TableLookup = Mapping[tuple[Sex, int], MortalityTable]


def generate_population(spec: PopulationSpec, tables: TableLookup) -> list[Member]:
    """
    Draw members with vNM power preferences.

    All attributes are independent uniform draws from one POPULATION
    substream, so the result depends only on `spec`.

    Raises:
        ConfigurationError: If no table exists for a drawn (sex, age).
    """
    rng = substream(spec.seed, Stream.POPULATION, 0)
    female = rng.random(spec.n) < spec.sex_split
    powers = rng.uniform(*spec.power_range, size=spec.n)
    wealth = rng.uniform(*spec.wealth_range, size=spec.n)
    lo, hi = spec.retirement_age_range
    ages = rng.integers(lo, hi + 1, size=spec.n)

    members = []
    for i in range(spec.n):
        sex = Sex.FEMALE if female[i] else Sex.MALE
        age = int(ages[i])
        try:
            table = tables[(sex, age)]
        except KeyError:
            raise ConfigurationError(f"no mortality table for {sex} retiring at {age}") from None
        members.append(
            Member(
                id=i,
                prefs=VNMPreferences(rho=float(powers[i]), dt=table.dt),
                table=table,
                wealth=float(wealth[i]),
                sex=sex,
                retirement_age=age,
            )
        )
    return members


def population_tables(
    ages: tuple[int, int],
    female_modal_age: float = 91.25,
    male_modal_age: float = 88.5,
    growth: float = 1.11,
    max_age: float = 125.0,
    dt: float = 1.0,
    eps: float = 1e-5,
) -> dict[tuple[Sex, int], MortalityTable]:
    """Gompertz cohort tables for every (sex, retirement age) in the inclusive range."""
    modal = {Sex.FEMALE: female_modal_age, Sex.MALE: male_modal_age}
    return {
        (sex, age): gompertz_cohort_table(
            modal[sex],
            growth,
            float(age),
            dt=dt,
            max_age=max_age,
            eps=eps,
            name=f"{sex}-{age}",
        )
        for sex in Sex
        for age in range(ages[0], ages[1] + 1)
    }


def identical_population(
    prefs: VNMPreferences | KMPreferences, table: MortalityTable, wealth: float, n: int
) -> list[Member]:
    """`n` copies of one member type."""
    return [Member(id=i, prefs=prefs, table=table, wealth=wealth) for i in range(n)]


def sex_share(members: list[Member]) -> float:
    """Fraction of female members."""
    return float(np.mean([m.sex is Sex.FEMALE for m in members]))
