"""Scale-free solver for homogeneous Epstein-Zin preferences.

With EZ utility the value is linear in wealth, V(t, x) = k_t x, so the
whole problem reduces to one scalar recursion per step. With consumption
rate gamma = c x / dt and savings (1 - c) x,

    k_t = [(c/dt)**rho + beta (1 - c)**rho M_t**(rho/alpha)]**(1/rho),
    M_t = s_t E[R**alpha] E_B[(k_{t+1,B} m_B)**alpha],

where m_B is the mortality-credit multiplier. Returns and the survivor
count are independent, so the risky weight maximises the certainty
equivalent E[R**alpha]**(1/alpha) on its own. Everything is done in
logs so that long horizons do not overflow.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import pandas as pd
from loguru import logger
from scipy.special import logsumexp

from collective_fund.config.models import GridConfig
from collective_fund.dp.fund_kind import FundKind
from collective_fund.dp.grid import consumption_fractions, portfolio_grid
from collective_fund.dp.search import golden_section_max
from collective_fund.errors import SolverError, ValidationError
from collective_fund.market.params import MarketParams
from collective_fund.market.quadrature import return_node_matrix
from collective_fund.mortality.table import MortalityTable
from collective_fund.prefs.ez import EZPreferences
from collective_fund.prefs.power import spow
from collective_fund.prefs.vnm import VNMPreferences

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class HomogeneousSolution:
    """Value-per-wealth, consumption fraction and weight schedules.

    Attributes:
        kind: Fund structure.
        dt: Years per step.
        log_k: log k_t per (step, survivor slice).
        c: Fraction of wealth consumed per (step, survivor slice).
        pi: Risky weight per step.
        prefs: Preferences the schedules were solved for.
    """

    kind: FundKind
    dt: float
    log_k: FloatArray
    c: FloatArray
    pi: FloatArray
    prefs: EZPreferences

    @property
    def k(self) -> FloatArray:
        return np.exp(self.log_k)

    @property
    def is_riskless(self) -> bool:
        return bool(np.all(self.pi == 0.0))

    def _slices(self, survivors: npt.ArrayLike, shape: tuple[int, ...]) -> npt.NDArray[np.intp]:
        if not self.kind.is_finite:
            return np.zeros(shape, dtype=np.intp)
        counts = np.broadcast_to(np.asarray(survivors, dtype=np.intp), shape)
        if np.any(counts < 1) or np.any(counts > self.kind.n_slices):
            raise ValidationError(f"survivor counts outside 1..{self.kind.n_slices}")
        return counts - 1

    def controls(
        self,
        t_index: int,
        wealth: FloatArray,
        survivors: npt.NDArray[np.intp] | int = 1,
    ) -> tuple[FloatArray, FloatArray]:
        x = np.asarray(wealth, dtype=np.float64)
        slices = self._slices(survivors, x.shape)
        gamma = self.c[t_index, slices] * np.maximum(x, 0.0) / self.dt
        return gamma, np.full(x.shape, self.pi[t_index])

    def out_of_domain(self, wealth: FloatArray) -> int:  # noqa: ARG002
        return 0

    def value(self, t_index: int, wealth: float, survivors: int = 1) -> float:
        """EZ utility Z = k_t x."""
        slice_index = self.kind.slice_for(survivors)
        return float(np.exp(self.log_k[t_index, slice_index]) * wealth)

    def vnm_gain(self, wealth: float, survivors: int = 1) -> float:
        """Expected additive utility when alpha = rho: dt * spow(rho, Z_0)."""
        if self.prefs.alpha != self.prefs.rho:
            raise ValidationError("additive gain needs alpha == rho")
        z = self.value(0, wealth, survivors)
        return float(spow(self.prefs.rho, z)) * self.dt

    def frame(self, t_grid: FloatArray) -> pd.DataFrame:
        """One row per (t[, n]) with columns `t,[n,]c,pi,k`."""
        n_steps, n_slices = self.c.shape
        t_idx, s_idx = np.meshgrid(np.arange(n_steps), np.arange(n_slices), indexing="ij")
        columns: dict[str, npt.ArrayLike] = {"t": t_grid[t_idx.ravel()]}
        if self.kind.is_finite:
            columns["n"] = s_idx.ravel() + 1
        columns["c"] = self.c.ravel()
        columns["pi"] = self.pi[t_idx.ravel()]
        columns["k"] = np.exp(self.log_k).ravel()
        return pd.DataFrame(columns)


def _best_weight(
    prefs: EZPreferences, mp: MarketParams, dt: float, grid: GridConfig
) -> tuple[float, float]:
    """Weight maximising E[R**alpha]**(1/alpha) and log E[R**alpha] there."""
    alpha = prefs.alpha
    K = grid.quadrature_K

    def log_moment(pi: FloatArray) -> FloatArray:
        R, w = return_node_matrix(mp, pi, dt, K)
        return np.asarray(logsumexp(alpha * np.log(R), axis=-1, b=w))

    def certainty_equivalent(pi: FloatArray) -> FloatArray:
        return log_moment(pi) / alpha

    pis = portfolio_grid(grid)
    coarse = certainty_equivalent(pis)
    best = int(np.argmax(coarse))
    pi_star = float(pis[best])
    if pis.size > 1:
        spacing = pis[1] - pis[0]
        lo = max(pi_star - spacing, pis[0])
        hi = min(pi_star + spacing, pis[-1])
        refined, value = golden_section_max(
            certainty_equivalent, np.array([lo]), np.array([hi]), tol=grid.tolerance
        )
        if value[0] > coarse[best]:
            pi_star = float(refined[0])
    return pi_star, float(log_moment(np.array(pi_star)))


def _log_k(
    prefs: EZPreferences, c: FloatArray, log_future: FloatArray, dt: float
) -> FloatArray:
    """log k for consumption fractions c given log M (broadcast together)."""
    rho = prefs.rho
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        now = rho * np.log(c / dt)
        later = np.log(prefs.beta) + rho * np.log1p(-c) + (rho / prefs.alpha) * log_future
        # A zero-weight term cannot contribute whatever its exponent.
        later = np.where(np.isneginf(log_future), -np.inf, later)
        return np.logaddexp(now, later) / rho


def solve_ez_homogeneous(
    prefs: EZPreferences | VNMPreferences,
    mp: MarketParams,
    table: MortalityTable,
    kind: FundKind,
    grid: GridConfig,
) -> HomogeneousSolution:
    """
    Solve the scalar k_t recursion backwards.

    Args:
        prefs: EZ preferences, or vNM preferences (treated as EZ with alpha = rho).
        mp: Market parameters.
        table: Truncated mortality table.
        kind: Any fund kind; finite collectives get one schedule per survivor count.
        grid: Supplies the coarse control grids, quadrature order and tolerance.

    Returns:
        The schedules as a strategy.

    Raises:
        SolverError: If k_t diverges at some step.
    """
    ez = prefs.as_epstein_zin() if isinstance(prefs, VNMPreferences) else prefs
    dt = table.dt
    n_steps, n_slices = table.n_steps, kind.n_slices
    survivals = table.one_period_survivals
    log_k = np.empty((n_steps, n_slices))
    c = np.empty((n_steps, n_slices))
    pi = np.empty(n_steps)

    pi_star, log_return_moment = _best_weight(ez, mp, dt, grid)
    fractions = consumption_fractions(grid)
    logger.info("Solving homogeneous EZ for {} on {} steps", kind.label, n_steps)

    for t in range(n_steps - 1, -1, -1):
        s = float(survivals[t])
        log_future = np.full(n_slices, -np.inf)
        if s > 0.0:
            for j in range(n_slices):
                out = kind.outcomes(s, j, grid.binomial_cutoff)
                terms = ez.alpha * (log_k[t + 1, out.next_slices] + np.log(out.multipliers))
                log_future[j] = (
                    np.log(s) + log_return_moment + float(logsumexp(terms, b=out.probabilities))
                )
            pi[t] = pi_star
        else:
            pi[t] = portfolio_grid(grid)[0]

        coarse = _log_k(ez, fractions[:, None], log_future[None, :], dt)
        coarse = np.nan_to_num(coarse, nan=-np.inf)
        best = np.argmax(coarse, axis=0)
        c_star = fractions[best]
        value = coarse[best, np.arange(n_slices)]

        step = fractions[1] - fractions[0]
        lo = np.maximum(c_star - step, 0.0)
        hi = np.minimum(c_star + step, 1.0)
        refined, refined_value = golden_section_max(
            lambda f: _log_k(ez, f, log_future, dt), lo, hi, tol=grid.tolerance
        )
        better = refined_value > value
        c[t] = np.where(better, refined, c_star)
        log_k[t] = np.where(better, refined_value, value)

        if not np.all(np.isfinite(log_k[t])):
            raise SolverError("value-per-wealth diverged", t=float(table.t_grid[t]))
        logger.debug("EZ step t={} c={} pi={:.4f}", table.t_grid[t], c[t, -1], pi[t])

    for array in (log_k, c, pi):
        array.setflags(write=False)
    return HomogeneousSolution(kind=kind, dt=dt, log_k=log_k, c=c, pi=pi, prefs=ez)
