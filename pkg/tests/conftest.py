"""Shared pytest fixtures for collective fund tests."""

from pathlib import Path

import numpy as np
import pytest

from collective_fund.config.models import Config
from collective_fund.market.params import MarketParams
from collective_fund.mortality.io import load_bundled_table
from collective_fund.mortality.synthetic import gompertz_cohort_table
from collective_fund.mortality.table import MortalityTable, truncate_tail
from collective_fund.prefs.schedules import Schedules
from collective_fund.prefs.vnm import VNMPreferences

from tests.factories import (
    BASELINE_ADEQUACY,
    BASELINE_R_TL,
    BASELINE_SP0,
    fast_config,
    write_table_csv,
)


@pytest.fixture
def market() -> MarketParams:
    """market."""
    return MarketParams(r=0.027, mu=0.062, sigma=0.15)


@pytest.fixture
def two_step_table() -> MortalityTable:
    """Death masses (0.4, 0.6) on t = 0, 1."""
    return MortalityTable(p=np.array([0.4, 0.6]), dt=1.0, name="two-step")


@pytest.fixture
def short_table() -> MortalityTable:
    """A ten-year Gompertz table starting at age 85."""
    return gompertz_cohort_table(91.25, 1.11, 85.0, max_age=95.0, eps=1e-5, name="short")


@pytest.fixture
def bundled_table() -> MortalityTable:
    """Bundled table, tail-truncated as the experiments use it."""
    return truncate_tail(load_bundled_table(), 1e-5)


@pytest.fixture
def baseline_schedules(bundled_table: MortalityTable) -> Schedules:
    """state pension and adequacy schedules on the bundled grid."""
    return Schedules.for_table(bundled_table, BASELINE_SP0, BASELINE_R_TL, BASELINE_ADEQUACY)


@pytest.fixture
def vnm() -> VNMPreferences:
    """Power utility with rho = -1."""
    return VNMPreferences(rho=-1.0)



@pytest.fixture
def table_csv(tmp_path: Path, short_table: MortalityTable) -> Path:
    """The short table written as a `t,p` file."""
    return write_table_csv(tmp_path / "short.csv", short_table)


@pytest.fixture
def fast_cfg(tmp_path: Path, table_csv: Path) -> Config:
    """Small end-to-end configuration writing into `tmp_path/out`."""
    return fast_config(table_csv, tmp_path / "out")
