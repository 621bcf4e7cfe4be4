"""Tree cost estimation: pessimistic error counts, misclassification cost,
test cost, and the automatic parameter scale of a problem.

The pessimistic error count EE(m, s, cf) is the exact upper limit of a
binomial proportion: the smallest p with BinomialCDF(s; m, p) <= cf, times
m.  Smaller cf values are more pessimistic.  The closed forms at s = 0 and
s = m are the limits of the same construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import special

from .costs import ChargeContext, CostModel, EMPTY_CONTEXT, charge, context_cost
from .dataset import Dataset
from .tree import DecisionTree, Leaf, Node, NominalSplit, average_tcost, iter_leaves


@lru_cache(maxsize=1 << 16)
def _ee_cached(m: int, s: int, cf: float) -> float:
    if s == m:
        return float(m)
    if s == 0:
        return m * (1.0 - cf ** (1.0 / m))
    # upper limit p solves I_p(s+1, m-s) = 1 - cf (regularized incomplete beta)
    p = special.betaincinv(s + 1, m - s, 1.0 - cf)
    return float(m * p)


def expected_error(m: int, s: int, cf: float) -> float:
    """Pessimistic expected number of errors among m examples of which s
    were misclassified, at pessimism level cf (smaller = more pessimistic).
    """
    m = int(m)
    s = int(s)
    if m < 1:
        raise ValueError("m must be at least 1")
    if not 0 <= s <= m:
        raise ValueError("s must lie in [0, m]")
    if not 0.0 < cf < 1.0:
        raise ValueError("cf must lie in (0, 1)")
    return _ee_cached(m, s, float(cf))


def leaf_mcost(counts, label: int, model: CostModel, cf: float) -> float:
    """Pessimistic misclassification cost of one leaf (a total over the
    leaf's m examples, not a per-example figure).

    The expected error count is distributed over the non-predicted classes
    with Laplace-corrected weights, pricing each error by matrix[actual,
    predicted].  With a uniform matrix this reduces to EE times the shared
    cost.  Zero-count leaves cost nothing.
    """
    counts = np.asarray(counts, dtype=np.int64)
    m = int(counts.sum())
    if m == 0:
        return 0.0
    c = len(counts)
    label = int(label)
    s = m - int(counts[label])
    ee = expected_error(m, s, cf)
    others = [i for i in range(c) if i != label]
    denom = s + c - 1
    weights = np.array([(counts[i] + 1) / denom for i in others])
    penalties = np.array([model.matrix[i, label] for i in others])
    return float(ee * (weights @ penalties))


def tree_mcost(node: Node | DecisionTree, m: int, model: CostModel, cf: float) -> float:
    """Per-example pessimistic misclassification cost of a tree whose leaf
    counts were filled from m training examples."""
    if isinstance(node, DecisionTree):
        node = node.root
    if m < 1:
        raise ValueError("m must be at least 1")
    total = 0.0
    for leaf in iter_leaves(node):
        total += leaf_mcost(leaf.counts, leaf.label, model, cf)
    return total / m


class CostEstimate(NamedTuple):
    tcost: float
    mcost: float
    total: float


def _subtree_tcost(node: Node, ctx: ChargeContext, model: CostModel) -> float:
    """Sum over internal nodes of (examples reaching the node) x (context
    price of its test).  Equals replaying every example's path charges,
    because all examples at a node share the same path context."""
    if isinstance(node, Leaf):
        return 0.0
    m_node = int(node.counts.sum())
    price, ctx2 = charge(node.attr, ctx, model)
    total = m_node * price
    if isinstance(node, NominalSplit):
        for child in node.children:
            total += _subtree_tcost(child, ctx2, model)
    else:
        total += _subtree_tcost(node.low, ctx2, model)
        total += _subtree_tcost(node.high, ctx2, model)
    return total


def total_cost(
    tree: Node | DecisionTree,
    examples,
    model: CostModel,
    cf: float = 0.25,
    ctx: ChargeContext = EMPTY_CONTEXT,
) -> CostEstimate:
    """Estimated per-example cost of a tree on its training examples:
    average charged test cost plus pessimistic misclassification cost.

    ``examples`` is the training collection the leaf counts were filled
    from, or just its size.  Because every example at a node shares the
    node's path context, the average test charge equals the count-weighted
    sum over internal nodes, which is how it is computed here.  ``ctx``
    carries tests already administered above the tree, whose prices (and
    group discounts) the estimate must respect.
    """
    node = tree.root if isinstance(tree, DecisionTree) else tree
    m = int(examples) if isinstance(examples, (int, np.integer)) else len(examples)
    if m < 1:
        raise ValueError("total_cost needs at least one example")
    tcost = _subtree_tcost(node, ctx, model) / m
    mcost = tree_mcost(node, m, model, cf)
    return CostEstimate(tcost, mcost, tcost + mcost)


# -- automatic parameter scale ---------------------------------------------------


def total_test_cost(model: CostModel) -> float:
    """Price of administering every test once, group discounts applied
    after each group's first member (order-independent)."""
    ctx = EMPTY_CONTEXT
    total = 0.0
    for attr in range(model.n_attributes):
        price, ctx = charge(attr, ctx, model)
        total += price
    return total


class ProblemScale(NamedTuple):
    x: float
    w: float
    cf: float
    tc: float


def problem_scale(model: CostModel) -> ProblemScale:
    """Derive the cost-sensitivity scale of a problem and the matching
    criterion parameters.

    x is the mean off-diagonal misclassification cost relative to the
    price of administering all tests once; w = 0.5 + exp(-x) and
    cf = 0.2 + 0.05 * (1 + (x - 1)/(x + 1)) interpolate between the
    accuracy-driven and cost-driven regimes.
    """
    tc = total_test_cost(model)
    if tc <= 0:
        raise ValueError("cannot scale a problem with zero total test cost")
    c = model.n_classes
    x = float(model.matrix.sum() / ((c - 1) * c * tc))
    w = 0.5 + math.exp(-x)
    cf = 0.2 + 0.05 * (1.0 + (x - 1.0) / (x + 1.0))
    return ProblemScale(x, w, cf, tc)
