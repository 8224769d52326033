"""Port interfaces (Protocols) shared across packages."""

from collective_fund.ports.policies import MemberPolicyPort
from collective_fund.ports.strategy import StrategyPort

__all__ = ["MemberPolicyPort", "StrategyPort"]
