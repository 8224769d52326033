"""Heterogeneous funds: populations, estate redistribution and simulation."""

from collective_fund.pool.fund import (
    FundState,
    StepReport,
    contribution,
    redistribute_estates,
    step_fund,
)
from collective_fund.pool.policy_cache import MemberPolicies, MemberSolution, PolicyCache
from collective_fund.pool.population import (
    Member,
    PopulationSpec,
    Sex,
    generate_population,
    identical_population,
    population_tables,
    sex_share,
)
from collective_fund.pool.simulation import (
    OR_BIN_WIDTH,
    HeteroResult,
    optimality_ratio,
    or_histogram,
    run_hetero_mc,
)

__all__ = [
    "OR_BIN_WIDTH",
    "FundState",
    "HeteroResult",
    "Member",
    "MemberPolicies",
    "MemberSolution",
    "PolicyCache",
    "PopulationSpec",
    "Sex",
    "StepReport",
    "contribution",
    "generate_population",
    "identical_population",
    "optimality_ratio",
    "or_histogram",
    "population_tables",
    "redistribute_estates",
    "run_hetero_mc",
    "sex_share",
    "step_fund",
]
