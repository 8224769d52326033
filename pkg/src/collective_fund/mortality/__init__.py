"""Discrete mortality distributions: ingestion, truncation and queries."""

from collective_fund.mortality.io import (
    DEFAULT_TABLE,
    load_bundled_table,
    load_mortality_csv,
    parse_mortality_csv,
)
from collective_fund.mortality.synthetic import gompertz_cohort_table, gompertz_makeham_table
from collective_fund.mortality.table import (
    MortalityTable,
    one_period_survival,
    survival,
    truncate_tail,
)

__all__ = [
    "DEFAULT_TABLE",
    "MortalityTable",
    "gompertz_cohort_table",
    "gompertz_makeham_table",
    "load_bundled_table",
    "load_mortality_csv",
    "one_period_survival",
    "parse_mortality_csv",
    "survival",
    "truncate_tail",
]
