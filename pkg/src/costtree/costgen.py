"""Parametric random cost assignment for datasets that lack real test costs.

Costs are drawn from a range cr = [lo, hi]; a fraction g of the attributes
is organized into shared-cost groups whose later members are discounted by
phi times the group's cheapest base cost; rho switches between costs drawn
independently (0) and costs correlated with each attribute's information
gain (1), where a more informative test tends to be more expensive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .costs import CostModel
from .dataset import Dataset
from .errors import UnsupportedFeatureError
from .induction import best_numeric_split, info_gain


@dataclass(frozen=True)
class CostAssignmentParams:
    cr: tuple[float, float] = (1.0, 100.0)
    g: float = 0.2
    d: float = 0.0
    phi: float = 0.8
    rho: float = 1.0

    def __post_init__(self):
        lo, hi = self.cr
        if not (0.0 < lo <= hi):
            raise ValueError("cost range needs 0 < lo <= hi")
        if not 0.0 <= self.g <= 1.0:
            raise ValueError("g must lie in [0, 1]")
        if not 0.0 <= self.phi < 1.0:
            raise ValueError("phi must lie in [0, 1)")
        if self.rho not in (0.0, 1.0):
            raise ValueError("rho must be 0 or 1")


def _attribute_gains(ds: Dataset) -> np.ndarray:
    rows = np.arange(len(ds))
    gains = np.zeros(ds.n_attributes)
    for a in ds.schema:
        if a.is_numeric:
            best = best_numeric_split(ds, rows, a.index)
            gains[a.index] = best[1] if best is not None else 0.0
        else:
            gains[a.index] = info_gain(ds, rows, a.index)
    return gains


def _truncated_normal(rng: np.random.Generator, mean: float, sd: float, lo: float, hi: float) -> float:
    # resample up to 100 times, then clamp
    for _ in range(100):
        v = rng.normal(mean, sd)
        if lo <= v <= hi:
            return float(v)
    return float(min(max(mean, lo), hi))


def assign_costs(
    ds: Dataset,
    params: CostAssignmentParams = CostAssignmentParams(),
    seed: int = 0,
    matrix: np.ndarray | float | None = None,
) -> CostModel:
    """Draw a cost model for a dataset.

    Draw order is fixed: group membership for every attribute first, then
    base costs in attribute order.  Each attribute lands in one of the
    k = round(g * |A|) groups or in none of them, uniformly over those
    k + 1 choices.  With rho = 1 the cost of an attribute is a truncated
    normal centered at lo + gain/max_gain * (hi - lo) with sd (hi - lo)/4
    (all-zero gains center every attribute at lo).  Delayed-result tests
    (d != 0) are not modeled.
    """
    if params.d != 0.0:
        raise UnsupportedFeatureError("delayed-result tests are not supported (d must be 0)")
    rng = np.random.default_rng(seed)
    n = ds.n_attributes
    lo, hi = params.cr
    k = int(round(params.g * n))
    # draw u in {0..k}: u < k joins group u, u == k stays ungrouped
    membership = rng.integers(0, k + 1, size=n)
    if params.rho == 0.0:
        costs = rng.uniform(lo, hi, size=n)
    else:
        gains = _attribute_gains(ds)
        max_gain = float(gains.max()) if n else 0.0
        sd = (hi - lo) / 4.0
        costs = np.empty(n)
        for j in range(n):
            mean = lo if max_gain <= 0 else lo + gains[j] / max_gain * (hi - lo)
            costs[j] = _truncated_normal(rng, mean, sd, lo, hi)
    group_names = []
    discounts = []
    group_of = np.full(n, -1, dtype=np.int64)
    for g in range(k):
        members = np.flatnonzero(membership == g)
        if len(members) == 0:
            continue
        group_of[members] = len(group_names)
        group_names.append(f"g{g + 1}")
        discounts.append(params.phi * float(costs[members].min()))
    c = len(ds.classes)
    if matrix is None:
        m = np.zeros((c, c))
    elif np.isscalar(matrix):
        m = np.full((c, c), float(matrix))
        np.fill_diagonal(m, 0.0)
    else:
        m = np.asarray(matrix, dtype=np.float64)
    return CostModel(
        attr_names=tuple(a.name for a in ds.schema),
        class_names=ds.classes,
        test_costs=costs,
        group_of=group_of,
        group_discounts=np.asarray(discounts, dtype=np.float64),
        group_names=tuple(group_names),
        matrix=m,
    )
