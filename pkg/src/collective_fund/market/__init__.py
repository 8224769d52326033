"""Market model: lognormal returns, quadrature and shocks."""

from collective_fund.market.params import MarketParams, log_return_params, realized_returns
from collective_fund.market.quadrature import (
    ReturnQuadrature,
    return_node_matrix,
    return_nodes,
    standard_normal_nodes,
)
from collective_fund.market.shocks import ShockMatrix, Stream, simulate_shocks, substream

__all__ = [
    "MarketParams",
    "ReturnQuadrature",
    "ShockMatrix",
    "Stream",
    "log_return_params",
    "realized_returns",
    "return_node_matrix",
    "return_nodes",
    "simulate_shocks",
    "standard_normal_nodes",
    "substream",
]
