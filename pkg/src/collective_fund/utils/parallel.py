"""Worker-count resolution for thread pools."""

import os

THREADS_ENV = "COLLECTIVE_FUND_THREADS"


def resolve_worker_count(threads: int | None = None) -> int:
    """
    Resolve how many worker threads a pool may use.

    Args:
        threads: Explicit cap; 0 means auto. When None the
            COLLECTIVE_FUND_THREADS environment variable is consulted.

    Returns:
        Positive worker count.

    Raises:
        ValueError: If the cap is negative or not an integer.
    """
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            threads = int(raw)
        except ValueError as e:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from e

    if threads < 0:
        raise ValueError("thread cap must be >= 0")

    if threads == 0:
        return os.cpu_count() or 1
    return threads
