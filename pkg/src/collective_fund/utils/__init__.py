"""Collective fund utility modules."""

from collective_fund.utils.files import write_text_atomic
from collective_fund.utils.hashing import compute_array_checksum
from collective_fund.utils.logging import configure_logging
from collective_fund.utils.parallel import resolve_worker_count

__all__ = [
    "compute_array_checksum",
    "configure_logging",
    "resolve_worker_count",
    "write_text_atomic",
]
