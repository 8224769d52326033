"""Hashing utilities for cache keys."""

import hashlib

import numpy as np
import numpy.typing as npt


def compute_array_checksum(*arrays: npt.ArrayLike) -> str:
    """
    Compute SHA-256 checksum over the float64 bytes of several arrays.

    Args:
        arrays: Arrays (or scalars) to hash, in order.

    Returns:
        Hex-encoded SHA-256 hash.
    """
    sha256 = hashlib.sha256()
    for array in arrays:
        data = np.ascontiguousarray(np.asarray(array, dtype=np.float64))
        sha256.update(str(data.shape).encode("utf-8"))
        sha256.update(data.tobytes())
    return sha256.hexdigest()
