"""Vectorised golden-section search.

Every element of the bracket arrays is an independent one-dimensional
maximisation sharing a single objective call per iteration.
"""

import math
from collections.abc import Callable

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def _safe(obj: Callable[[FloatArray], FloatArray]) -> Callable[[FloatArray], FloatArray]:
    def wrapped(x: FloatArray) -> FloatArray:
        return np.nan_to_num(np.asarray(obj(x), dtype=np.float64), nan=-np.inf, posinf=np.inf)

    return wrapped


def golden_section_max(
    obj: Callable[[FloatArray], FloatArray],
    a: npt.ArrayLike,
    b: npt.ArrayLike,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> tuple[FloatArray, FloatArray]:
    """
    Maximise a unimodal objective on each bracket [a_i, b_i].

    NaN objective values count as -inf. On ties the lower point wins.

    Args:
        obj: Vectorised objective, called with an array shaped like `a`.
        a: Lower bracket ends.
        b: Upper bracket ends.
        tol: Absolute width at which the search stops.
        max_iter: Iteration cap.

    Returns:
        (argmax, max) arrays.
    """
    f = _safe(obj)
    lo = np.array(a, dtype=np.float64)
    hi = np.array(b, dtype=np.float64)
    dist = hi - lo

    widest = float(np.max(dist)) if dist.size else 0.0
    if widest <= tol:
        x = (lo + hi) / 2.0
        return x, f(x)

    n = min(int(math.ceil(math.log(tol / widest) / math.log(INV_PHI))), max_iter)

    c = lo + INV_PHI_SQ * dist
    d = lo + INV_PHI * dist
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        keep_lower = yc >= yd
        dist = INV_PHI * dist
        hi = np.where(keep_lower, d, hi)
        lo = np.where(keep_lower, lo, c)
        new_c = lo + INV_PHI_SQ * dist
        new_d = lo + INV_PHI * dist
        probe = np.where(keep_lower, new_c, new_d)
        y_probe = f(probe)
        c, d, yc, yd = (
            np.where(keep_lower, probe, d),
            np.where(keep_lower, c, probe),
            np.where(keep_lower, y_probe, yd),
            np.where(keep_lower, yc, y_probe),
        )

    best = np.where(yc >= yd, c, d)
    return best, np.maximum(yc, yd)
