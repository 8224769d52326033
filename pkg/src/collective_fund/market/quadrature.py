"""Gauss-Hermite quadrature for one-step lognormal returns."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from numpy.polynomial.hermite import hermgauss

from collective_fund.errors import ValidationError
from collective_fund.market.params import MarketParams, log_return_params


@dataclass(frozen=True, eq=False)
class ReturnQuadrature:
    """Gross one-period return nodes with probability weights."""

    nodes: npt.NDArray[np.float64]
    weights: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValidationError("nodes and weights must be matching vectors")
        if np.any(self.nodes <= 0.0):
            raise ValidationError("gross returns must be positive")

    def expectation(self, values: npt.ArrayLike) -> float:
        """Weighted sum of values at the nodes."""
        return float(np.dot(self.weights, np.asarray(values, dtype=np.float64)))


@lru_cache(maxsize=64)
def standard_normal_nodes(K: int) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Nodes and weights integrating against the standard normal density.

    Raises:
        ValidationError: If K < 1.
    """
    if K < 1:
        raise ValidationError(f"need at least one quadrature node, got K={K}")
    x, w = hermgauss(K)
    nodes = x * np.sqrt(2.0)
    weights = w / np.sqrt(np.pi)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def return_nodes(mp: MarketParams, pi: float, dt: float, K: int) -> ReturnQuadrature:
    """
    K-node quadrature of the gross return exp(mean + sd * xi).

    A riskless portfolio collapses to the single node exp(r * dt).

    Raises:
        ValidationError: If K < 1.
    """
    xi, w = standard_normal_nodes(K)
    mean, sd = log_return_params(mp, pi, dt)
    if float(sd) == 0.0:
        return ReturnQuadrature(nodes=np.array([np.exp(float(mean))]), weights=np.ones(1))
    return ReturnQuadrature(nodes=np.exp(mean + sd * xi), weights=np.array(w))


def return_node_matrix(
    mp: MarketParams, pis: npt.ArrayLike, dt: float, K: int
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Vectorised nodes for many weights at once.

    Returns:
        (R, w) with R of shape pis.shape + (K,) and w of shape (K,).
    """
    xi, w = standard_normal_nodes(K)
    mean, sd = log_return_params(mp, pis, dt)
    R = np.exp(mean[..., None] + sd[..., None] * xi)
    return R, np.asarray(w)
