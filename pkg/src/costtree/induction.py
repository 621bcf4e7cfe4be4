"""Top-down tree induction: split criteria, greedy and stochastic choosers,
immediate-cost splitting, and error-based pruning.

All functions operate on a Dataset plus an index array (``rows``) so that
recursive partitioning never copies columns.  Numeric attributes split by a
binary cut; candidate thresholds are midpoints between consecutive distinct
values whose class multisets differ.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .costs import ChargeContext, CostModel, EMPTY_CONTEXT, charge, context_cost
from .dataset import Dataset
from .errors import DataFormatError
from .estimate import expected_error
from .tree import DecisionTree, Leaf, Node, NominalSplit, NumericSplit, default_class, iter_leaves

GREEDY_CRITERIA = ("id3", "eg2", "idx", "csid3")
STOCHASTIC_CRITERIA = ("sid3", "seg2")
CRITERIA = GREEDY_CRITERIA + STOCHASTIC_CRITERIA + ("dtmc",)


@dataclass
class SplitCandidate:
    attribute: int
    threshold: float | None
    gain: float
    cost: float
    score: float


@dataclass
class InducerConfig:
    """Knobs shared by the single-pass inducers."""

    criterion: str = "id3"
    w: float = 1.0
    cf: float = 0.25
    seed: int = 0
    min_split: int = 2
    prune: bool | None = None  # None = per-criterion default

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if not 0.0 < self.cf < 1.0:
            raise ValueError("cf must lie in (0, 1)")
        if self.w < 0:
            raise ValueError("w must be non-negative")
        if self.min_split < 2:
            raise ValueError("min_split must be at least 2")


def derive_rng(seed: int, *key) -> np.random.Generator:
    """Deterministic per-site generator, independent of call order."""
    digest = hashlib.blake2b(repr((seed, key)).encode(), digest_size=8).digest()
    return np.random.default_rng(int.from_bytes(digest, "big"))


# -- information measures ------------------------------------------------------


def entropy(counts) -> float:
    """Shannon entropy in bits of a class-count vector."""
    counts = np.asarray(counts, dtype=np.float64)
    m = counts.sum()
    if m <= 0:
        return 0.0
    p = counts[counts > 0] / m
    return float(-(p * np.log2(p)).sum())


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    # entropy of each row of a (k, C) count matrix; empty rows give 0
    m = counts.sum(axis=1, keepdims=True).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(m > 0, counts / np.maximum(m, 1), 0.0)
        plogp = np.where(p > 0, p * np.log2(p), 0.0)
    return -plogp.sum(axis=1)


def _nominal_joint(ds: Dataset, rows: np.ndarray, attr: int) -> np.ndarray:
    codes = ds.column(attr)[rows].astype(np.int64)
    c = len(ds.classes)
    arity = ds.schema[attr].arity
    joint = np.bincount(codes * c + ds.y[rows], minlength=arity * c)
    return joint.reshape(arity, c)


def _nominal_joints_bulk(ds: Dataset, rows: np.ndarray, attrs) -> np.ndarray:
    """Joint (value, class) counts for several nominal attributes at once.

    Returns a (len(attrs), max_arity, n_classes) tensor filled with one
    bincount; attributes of lower arity pad with zero rows.
    """
    c = len(ds.classes)
    amax = max(ds.schema[a].arity for a in attrs)
    stride = amax * c
    y = ds.y[rows]
    keys = np.empty((len(attrs), len(rows)), dtype=np.int64)
    for i, attr in enumerate(attrs):
        np.multiply(ds.column(attr)[rows], c, out=keys[i])
        keys[i] += i * stride
    keys += y
    joint = np.bincount(keys.ravel(), minlength=len(attrs) * stride)
    return joint.reshape(len(attrs), amax, c)


def _gains_bulk(joints: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Information gain per attribute from a bulk joint tensor, plus a mask
    of attributes with at least two present values."""
    m_vc = joints.sum(axis=2, dtype=np.float64)
    m = m_vc[0].sum()
    splittable = (m_vc > 0).sum(axis=1) >= 2
    if m <= 0:
        return np.zeros(len(joints)), splittable
    h_parent = entropy(joints[0].sum(axis=0))
    with np.errstate(divide="ignore", invalid="ignore"):
        p = joints / m_vc[..., None]
        plogp = np.where(joints > 0, p * np.log2(p), 0.0)
    h_children = -plogp.sum(axis=2)
    gains = h_parent - (m_vc / m * h_children).sum(axis=1)
    return np.maximum(gains, 0.0), splittable


def _gain_from_joint(joint: np.ndarray) -> float:
    total = joint.sum(axis=0)
    m = total.sum()
    if m == 0:
        return 0.0
    h_parent = entropy(total)
    weights = joint.sum(axis=1) / m
    h_children = float((weights * _entropy_rows(joint)).sum())
    return max(h_parent - h_children, 0.0)


def numeric_split_info(
    ds: Dataset, rows: np.ndarray, attr: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Candidate thresholds for a numeric attribute with, per candidate,
    the information gain and the (left, right) class-count split.

    Returns (thresholds, gains, left_counts); right counts follow from the
    node totals.  Empty arrays when no boundary separates class multisets.
    """
    a = ds.schema[attr]
    if not a.is_numeric:
        raise ValueError(f"attribute {a.name!r} is not numeric")
    values = ds.column(attr)[rows]
    y = ds.y[rows]
    c = len(ds.classes)
    if len(rows) == 0:
        return np.empty(0), np.empty(0), np.empty((0, c), dtype=np.int64)
    order = np.argsort(values, kind="stable")
    v = values[order]
    yy = y[order]
    new_run = np.empty(len(v), dtype=bool)
    new_run[0] = True
    new_run[1:] = v[1:] != v[:-1]
    run_id = np.cumsum(new_run) - 1
    n_runs = int(run_id[-1]) + 1
    if n_runs < 2:
        return np.empty(0), np.empty(0), np.empty((0, c), dtype=np.int64)
    run_counts = np.zeros((n_runs, c), dtype=np.int64)
    np.add.at(run_counts, (run_id, yy), 1)
    boundary = np.any(run_counts[:-1] != run_counts[1:], axis=1)
    if not boundary.any():
        return np.empty(0), np.empty(0), np.empty((0, c), dtype=np.int64)
    run_values = v[new_run]
    thresholds = (run_values[:-1] + run_values[1:]) / 2.0
    cum = np.cumsum(run_counts, axis=0)
    left = cum[:-1]
    total = cum[-1]
    m = total.sum()
    right = total[None, :] - left
    h_parent = entropy(total)
    ml = left.sum(axis=1)
    gains = h_parent - (
        ml / m * _entropy_rows(left) + (m - ml) / m * _entropy_rows(right)
    )
    gains = np.maximum(gains, 0.0)
    return thresholds[boundary], gains[boundary], left[boundary]


def best_numeric_split(ds: Dataset, rows: np.ndarray, attr: int) -> tuple[float, float] | None:
    """(threshold, gain) of the best binary cut, or None if no candidate.
    Gain ties break to the lowest threshold."""
    thresholds, gains, _ = numeric_split_info(ds, rows, attr)
    if len(thresholds) == 0:
        return None
    best = int(np.argmax(gains))
    return float(thresholds[best]), float(gains[best])


def info_gain(ds: Dataset, rows: np.ndarray, attr: int, threshold: float | None = None) -> float:
    """Information gain of splitting ``rows`` on ``attr``.

    Numeric attributes require a threshold (binary cut at value <= threshold).
    """
    a = ds.schema[attr]
    if a.is_numeric:
        if threshold is None:
            raise ValueError("numeric attributes need a threshold")
        values = ds.column(attr)[rows]
        y = ds.y[rows]
        c = len(ds.classes)
        left = np.bincount(y[values <= threshold], minlength=c)
        right = np.bincount(y[values > threshold], minlength=c)
        return _gain_from_joint(np.stack([left, right]))
    if threshold is not None:
        raise ValueError("nominal attributes take no threshold")
    return _gain_from_joint(_nominal_joint(ds, rows, attr))


# -- split criteria ------------------------------------------------------------


def icf(gain: float, cost: float, w: float = 1.0) -> float:
    """Information-cost score (2^gain - 1) / (cost + 1)^w."""
    if cost < 0:
        raise ValueError("cost must be non-negative")
    if w < 0:
        raise ValueError("w must be non-negative")
    return (2.0 ** gain - 1.0) / ((cost + 1.0) ** w)


def criterion_score(criterion: str, gain: float, cost: float, w: float = 1.0) -> float:
    """Score a (gain, context cost) pair under a greedy criterion."""
    if criterion == "id3":
        return gain
    if criterion == "eg2":
        return icf(gain, cost, w)
    if criterion == "idx":
        if cost <= 0:
            return math.inf if gain > 0 else 0.0
        return gain / cost
    if criterion == "csid3":
        if cost <= 0:
            return math.inf if gain > 0 else 0.0
        return gain * gain / cost
    raise ValueError(f"unknown greedy criterion {criterion!r}")


def _candidate_splits(
    ds: Dataset, rows: np.ndarray, avail, ctx: ChargeContext, model: CostModel | None
) -> list[SplitCandidate]:
    """Splittable candidates with gain and context cost, in attribute order."""
    nominal = [a for a in avail if not ds.schema[a].is_numeric]
    gains: dict[int, float] = {}
    if nominal:
        joints = _nominal_joints_bulk(ds, rows, nominal)
        bulk_gains, splittable = _gains_bulk(joints)
        for i, attr in enumerate(nominal):
            if splittable[i]:
                gains[attr] = float(bulk_gains[i])
    out = []
    for attr in avail:
        a = ds.schema[attr]
        cost = context_cost(attr, ctx, model) if model is not None else 0.0
        if a.is_numeric:
            best = best_numeric_split(ds, rows, attr)
            if best is None:
                continue
            threshold, gain = best
            out.append(SplitCandidate(attr, threshold, gain, cost, 0.0))
        elif attr in gains:
            out.append(SplitCandidate(attr, None, gains[attr], cost, 0.0))
    return out


def choose_greedy(
    ds: Dataset,
    rows: np.ndarray,
    avail,
    criterion: str = "id3",
    ctx: ChargeContext = EMPTY_CONTEXT,
    model: CostModel | None = None,
    w: float = 1.0,
) -> SplitCandidate | None:
    """Argmax of the criterion score over splittable attributes.

    Ties break to the lowest attribute index (and lowest threshold within
    a numeric attribute, handled by the threshold search).
    """
    if criterion not in GREEDY_CRITERIA:
        raise ValueError(f"unknown greedy criterion {criterion!r}")
    best: SplitCandidate | None = None
    for cand in _candidate_splits(ds, rows, avail, ctx, model):
        cand.score = criterion_score(criterion, cand.gain, cand.cost, w)
        if best is None or cand.score > best.score:
            best = cand
    return best


def sample_proportional(rng: np.random.Generator, weights: np.ndarray) -> int:
    """Index drawn with probability proportional to ``weights``.

    All-zero weights fall back to a uniform draw; otherwise zero-weight
    entries are never drawn.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights < 0):
        raise ValueError("weights must be non-negative")
    total = weights.sum()
    if total <= 0:
        return int(rng.integers(len(weights)))
    return int(rng.choice(len(weights), p=weights / total))


def _as_rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def choose_sid3(ds: Dataset, rows: np.ndarray, avail, rng) -> SplitCandidate | None:
    """Stochastic variant of the gain criterion: draw an attribute with
    probability proportional to its information gain."""
    rng = _as_rng(rng)
    cands = _candidate_splits(ds, rows, avail, ctx=EMPTY_CONTEXT, model=None)
    if not cands:
        return None
    weights = np.array([c.gain for c in cands])
    pick = cands[sample_proportional(rng, weights)]
    pick.score = pick.gain
    return pick


def choose_seg2(
    ds: Dataset,
    rows: np.ndarray,
    avail,
    ctx: ChargeContext = EMPTY_CONTEXT,
    model: CostModel | None = None,
    w: float = 1.0,
    rng=0,
) -> SplitCandidate | None:
    """Stochastic variant of the information-cost criterion: draw an
    attribute with probability proportional to its score."""
    rng = _as_rng(rng)
    cands = _candidate_splits(ds, rows, avail, ctx, model)
    if not cands:
        return None
    for c in cands:
        c.score = icf(c.gain, c.cost, w)
    weights = np.array([c.score for c in cands])
    return cands[sample_proportional(rng, weights)]


def _leaf_penalties(counts: np.ndarray, model: CostModel) -> float:
    # cheapest achievable misclassification cost of predicting one class
    return float((counts @ model.matrix).min())


def choose_dtmc(
    ds: Dataset,
    rows: np.ndarray,
    avail,
    ctx: ChargeContext = EMPTY_CONTEXT,
    model: CostModel | None = None,
) -> SplitCandidate | None:
    """Split maximizing the immediate total-cost reduction; None when no
    split reduces cost (the stopping rule of the direct-minimization
    strategy)."""
    if model is None:
        raise ValueError("this chooser needs a cost model")
    c = len(ds.classes)
    parent_counts = ds.class_counts(rows)
    parent_cost = _leaf_penalties(parent_counts, model)
    m = len(rows)
    best: SplitCandidate | None = None
    for attr in avail:
        a = ds.schema[attr]
        cost = context_cost(attr, ctx, model)
        if a.is_numeric:
            thresholds, _, left = numeric_split_info(ds, rows, attr)
            if len(thresholds) == 0:
                continue
            right = parent_counts[None, :] - left
            child_cost = (left @ model.matrix).min(axis=1) + (right @ model.matrix).min(axis=1)
            reductions = parent_cost - (m * cost + child_cost)
            k = int(np.argmax(reductions))
            cand = SplitCandidate(attr, float(thresholds[k]), float("nan"), cost, float(reductions[k]))
        else:
            joint = _nominal_joint(ds, rows, attr)
            if (joint.sum(axis=1) > 0).sum() < 2:
                continue
            child_cost = float((joint @ model.matrix).min(axis=1).sum())
            reduction = parent_cost - (m * cost + child_cost)
            cand = SplitCandidate(attr, None, float("nan"), cost, reduction)
        if best is None or cand.score > best.score:
            best = cand
    if best is None or best.score <= 0:
        return None
    return best


# -- recursive growth ----------------------------------------------------------

Chooser = Callable[..., SplitCandidate | None]


def tdidt(
    ds: Dataset,
    rows: np.ndarray,
    avail,
    chooser: Chooser,
    model: CostModel | None = None,
    min_split: int = 2,
    ctx: ChargeContext = EMPTY_CONTEXT,
    path: tuple = (),
) -> Node:
    """Generic top-down induction.

    Stops at pure nodes, nodes below ``min_split`` examples, or when the
    chooser declines to split.  Nominal attributes leave the available set
    on their branch; numeric attributes may be cut repeatedly.  Empty
    branches become leaves labeled with the parent's default class.
    """
    counts = ds.class_counts(rows)
    label = default_class(counts, model)
    m = len(rows)
    if m < min_split or np.count_nonzero(counts) <= 1 or not len(avail):
        return Leaf(label, counts)
    cand = chooser(ds, rows, avail, ctx, path)
    if cand is None:
        return Leaf(label, counts)
    attr = cand.attribute
    ctx2 = charge(attr, ctx, model)[1] if model is not None else ctx
    if cand.threshold is None:
        codes = ds.column(attr)[rows]
        sub_avail = tuple(x for x in avail if x != attr)
        children = []
        for v in range(ds.schema[attr].arity):
            sub = rows[codes == v]
            if len(sub) == 0:
                children.append(Leaf(label, np.zeros(len(ds.classes), dtype=np.int64)))
            else:
                children.append(
                    tdidt(ds, sub, sub_avail, chooser, model, min_split, ctx2, path + ((attr, v),))
                )
        return NominalSplit(attr, tuple(children), counts)
    values = ds.column(attr)[rows]
    mask = values <= cand.threshold
    low = tdidt(ds, rows[mask], avail, chooser, model, min_split, ctx2, path + ((attr, 0),))
    high = tdidt(ds, rows[~mask], avail, chooser, model, min_split, ctx2, path + ((attr, 1),))
    return NumericSplit(attr, float(cand.threshold), low, high, counts)


def grow_greedy(
    ds: Dataset,
    rows: np.ndarray,
    avail,
    criterion: str,
    model: CostModel | None = None,
    w: float = 1.0,
    ctx: ChargeContext = EMPTY_CONTEXT,
    min_split: int = 2,
) -> Node:
    """One unpruned greedy tree over ``rows``."""

    def chooser(ds, rows, avail, ctx, path):
        return choose_greedy(ds, rows, avail, criterion, ctx, model, w)

    return tdidt(ds, rows, avail, chooser, model, min_split, ctx)


def grow_stochastic(
    ds: Dataset,
    rows: np.ndarray,
    avail,
    criterion: str,
    rng,
    model: CostModel | None = None,
    w: float = 1.0,
    ctx: ChargeContext = EMPTY_CONTEXT,
    min_split: int = 2,
) -> Node:
    """One unpruned stochastic tree; the generator is consumed in traversal
    order, so a fixed generator state fixes the tree."""
    rng = _as_rng(rng)
    if criterion == "sid3":
        def chooser(ds, rows, avail, ctx, path):
            return choose_sid3(ds, rows, avail, rng)
    elif criterion == "seg2":
        def chooser(ds, rows, avail, ctx, path):
            return choose_seg2(ds, rows, avail, ctx, model, w, rng)
    else:
        raise ValueError(f"unknown stochastic criterion {criterion!r}")
    return tdidt(ds, rows, avail, chooser, model, min_split, ctx)


# -- error-based pruning ---------------------------------------------------------


def _subtree_expected_errors(node: Node, cf: float) -> float:
    total = 0.0
    for leaf in iter_leaves(node):
        m = int(leaf.counts.sum())
        if m == 0:
            continue
        s = m - int(leaf.counts[int(np.argmax(leaf.counts))])
        total += expected_error(m, s, cf)
    return total


def error_based_prune(node: Node, cf: float = 0.25) -> Node:
    """Bottom-up replacement of subtrees by majority leaves whenever the
    leaf's pessimistic error estimate does not exceed the subtree's."""
    if isinstance(node, Leaf):
        return node
    if isinstance(node, NominalSplit):
        rebuilt: Node = NominalSplit(
            node.attr, tuple(error_based_prune(c, cf) for c in node.children), node.counts
        )
    else:
        rebuilt = NumericSplit(
            node.attr,
            node.threshold,
            error_based_prune(node.low, cf),
            error_based_prune(node.high, cf),
            node.counts,
        )
    m = int(node.counts.sum())
    if m == 0:
        return rebuilt
    label = int(np.argmax(node.counts))
    leaf_ee = expected_error(m, m - int(node.counts[label]), cf)
    if leaf_ee <= _subtree_expected_errors(rebuilt, cf):
        return Leaf(label, node.counts)
    return rebuilt


# -- single-pass front door -------------------------------------------------------

# pruning defaults: the accuracy-oriented greedy criteria prune like a
# classical learner, the stochastic samplers and the direct cost minimizer
# deliver their trees as grown
_PRUNE_DEFAULT = {
    "id3": True,
    "eg2": True,
    "idx": True,
    "csid3": True,
    "sid3": False,
    "seg2": False,
    "dtmc": False,
}


def induce(ds: Dataset, model: CostModel | None, config: InducerConfig) -> DecisionTree:
    """Grow (and optionally prune) one tree with a single-pass strategy."""
    rows = np.arange(len(ds))
    avail = tuple(range(ds.n_attributes))
    if config.criterion in GREEDY_CRITERIA:
        def chooser(ds_, rows_, avail_, ctx_, path_):
            return choose_greedy(ds_, rows_, avail_, config.criterion, ctx_, model, config.w)
    elif config.criterion in STOCHASTIC_CRITERIA:
        def chooser(ds_, rows_, avail_, ctx_, path_):
            rng = derive_rng(config.seed, path_)
            if config.criterion == "sid3":
                return choose_sid3(ds_, rows_, avail_, rng)
            return choose_seg2(ds_, rows_, avail_, ctx_, model, config.w, rng)
    else:
        if model is None:
            raise ValueError("the dtmc criterion needs a cost model")
        def chooser(ds_, rows_, avail_, ctx_, path_):
            return choose_dtmc(ds_, rows_, avail_, ctx_, model)
    root = tdidt(ds, rows, avail, chooser, model, config.min_split)
    prune = _PRUNE_DEFAULT[config.criterion] if config.prune is None else config.prune
    if prune:
        root = error_based_prune(root, config.cf)
    return DecisionTree(root, ds.schema, ds.classes)
