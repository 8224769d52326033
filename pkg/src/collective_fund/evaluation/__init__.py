"""Annuity pricing, Monte Carlo gains and consumption fans."""

from collective_fund.evaluation.annuity import (
    ConstantStrategy,
    annuity_equivalent,
    annuity_gain,
    annuity_outperformance,
    annuity_payout,
    cumulative_flows,
    death_integrated_gain,
)
from collective_fund.evaluation.fan import FanStatistics, fan_frame, fan_statistics, reference_frame
from collective_fund.evaluation.monte_carlo import (
    MCEstimate,
    SimulatedPaths,
    estimate_gain,
    mc_gain,
    simulate_paths,
)

__all__ = [
    "ConstantStrategy",
    "FanStatistics",
    "MCEstimate",
    "SimulatedPaths",
    "annuity_equivalent",
    "annuity_gain",
    "annuity_outperformance",
    "annuity_payout",
    "cumulative_flows",
    "death_integrated_gain",
    "estimate_gain",
    "fan_frame",
    "fan_statistics",
    "mc_gain",
    "reference_frame",
    "simulate_paths",
]
