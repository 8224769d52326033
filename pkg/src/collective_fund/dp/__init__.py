"""Backward-induction solvers, policy tables and the brute-force oracle."""

from collective_fund.dp.bellman import evaluate_path, evaluate_policy, solve_km
from collective_fund.dp.fund_kind import FundKind, FundKindName, Outcomes
from collective_fund.dp.grid import consumption_fractions, portfolio_grid, wealth_nodes
from collective_fund.dp.homogeneous import HomogeneousSolution, solve_ez_homogeneous
from collective_fund.dp.interpolation import ValueInterpolant
from collective_fund.dp.oracle import OracleInstance, brute_force_oracle
from collective_fund.dp.search import golden_section_max
from collective_fund.dp.tables import PolicyTable, SolveDiagnostics, ValueFunction, policy_frame
from collective_fund.dp.value_models import KMValueModel, ValueModel, VNMValueModel, value_model_for

__all__ = [
    "FundKind",
    "FundKindName",
    "HomogeneousSolution",
    "KMValueModel",
    "OracleInstance",
    "Outcomes",
    "PolicyTable",
    "SolveDiagnostics",
    "VNMValueModel",
    "ValueFunction",
    "ValueInterpolant",
    "ValueModel",
    "brute_force_oracle",
    "consumption_fractions",
    "evaluate_path",
    "evaluate_policy",
    "golden_section_max",
    "policy_frame",
    "portfolio_grid",
    "solve_ez_homogeneous",
    "solve_km",
    "value_model_for",
    "wealth_nodes",
]
