"""Exhaustive enumeration on tiny instances, for checking the grid solver."""

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from collective_fund.dp.fund_kind import FundKind
from collective_fund.dp.value_models import ValueModel, value_model_for
from collective_fund.errors import InstanceTooLargeError, ValidationError
from collective_fund.market.params import MarketParams
from collective_fund.market.quadrature import return_node_matrix
from collective_fund.mortality.table import MortalityTable
from collective_fund.prefs.km import KMPreferences
from collective_fund.prefs.vnm import VNMPreferences

FloatArray = npt.NDArray[np.float64]

MAX_STEPS = 2
MAX_RETURN_NODES = 3
# Largest array the enumeration may build at any level.
MAX_ELEMENTS = 50_000_000


@dataclass(frozen=True, eq=False)
class OracleInstance:
    """A small discrete problem.

    Attributes:
        prefs: KM or vNM preferences.
        mp: Market parameters.
        table: Mortality table with at most two steps.
        kind: Fund structure.
        x0: Initial wealth.
        fractions: Candidate fractions of wealth consumed.
        pis: Candidate risky weights.
        K: Return nodes per step.
    """

    prefs: KMPreferences | VNMPreferences
    mp: MarketParams
    table: MortalityTable
    kind: FundKind
    x0: float
    fractions: FloatArray = field(default_factory=lambda: np.linspace(0.0, 1.0, 41))
    pis: FloatArray = field(default_factory=lambda: np.linspace(0.0, 1.0, 11))
    K: int = 3


def _check_size(instance: OracleInstance) -> None:
    if instance.table.n_steps > MAX_STEPS:
        raise InstanceTooLargeError(f"oracle handles at most {MAX_STEPS} steps")
    if instance.K > MAX_RETURN_NODES:
        raise InstanceTooLargeError(f"oracle handles at most {MAX_RETURN_NODES} return nodes")
    controls = instance.fractions.size * instance.pis.size
    branches = instance.K * instance.kind.n_slices
    elements = 1
    for _ in range(instance.table.n_steps):
        elements *= controls * branches
        if elements > MAX_ELEMENTS:
            raise InstanceTooLargeError(
                f"enumeration needs more than {MAX_ELEMENTS} evaluations"
            )


def _values(
    instance: OracleInstance,
    model: ValueModel,
    t: int,
    wealth: FloatArray,
    slice_index: int,
) -> FloatArray:
    """Exact optimal native values for a flat array of wealths at step t."""
    dt = instance.table.dt
    s = float(instance.table.one_period_survivals[t])
    f = np.repeat(instance.fractions, instance.pis.size)
    pi = np.tile(instance.pis, instance.fractions.size)

    x = wealth[:, None]
    gamma = x * f[None, :] / dt
    flow = model.flow(gamma, t)
    if s <= 0.0:
        total = flow
    else:
        out = instance.kind.outcomes(s, slice_index)
        R, w = return_node_matrix(instance.mp, pi, dt, instance.K)
        savings = (x * (1.0 - f[None, :]))[..., None] * R[None, :, :]
        nxt = np.empty(savings.shape + (out.multipliers.size,))
        for j, (multiplier, next_slice) in enumerate(
            zip(out.multipliers, out.next_slices, strict=True)
        ):
            flat = (savings * multiplier).ravel()
            nxt[..., j] = _values(instance, model, t + 1, flat, int(next_slice)).reshape(
                savings.shape
            )
        weights = (w[:, None] * out.probabilities[None, :]).ravel()
        total = flow + model.continuation(
            nxt.reshape(savings.shape[:2] + (weights.size,)), weights, s
        )
    # argmax keeps the first maximiser: smallest fraction, then smallest weight.
    total = np.nan_to_num(total, nan=-np.inf)
    return total[np.arange(wealth.size), np.argmax(total, axis=1)]


def brute_force_oracle(instance: OracleInstance, survivors: int = 1) -> float:
    """
    Exact maximum expected gain of a discrete instance.

    Enumerates every control combination at every node of the scenario
    tree, with no interpolation in wealth.

    Args:
        instance: The discrete problem.
        survivors: Initial survivor count for finite collectives.

    Returns:
        Gain at t = 0 (KM: -exp(-z); vNM: expected utility).

    Raises:
        InstanceTooLargeError: If the enumeration would be too large.
        ValidationError: On a non-positive initial wealth.
    """
    if not instance.x0 > 0.0:
        raise ValidationError(f"x0 must be positive, got {instance.x0}")
    _check_size(instance)
    model = value_model_for(instance.prefs)
    native = _values(
        instance, model, 0, np.array([instance.x0]), instance.kind.slice_for(survivors)
    )
    return float(model.gain(native)[0])
