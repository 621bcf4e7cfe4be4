"""Anytime induction: invest a controllable amount of sampling per split
decision, then prune subtrees whose tests cost more than the errors they
prevent.

The contract-parameter r buys, for every candidate split, r sampled
subtrees per child (one greedy, r - 1 stochastic).  Each candidate is
priced at its own context cost plus, per child, the cheapest sampled
subtree's estimated total cost scaled by the child's share of the
training examples; the cheapest candidate wins.  r = 0 degenerates to the
greedy information-cost chooser.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import ChargeContext, CostModel, EMPTY_CONTEXT, charge, context_cost
from .dataset import Dataset
from .errors import CostTreeError
from .estimate import expected_error, problem_scale, total_cost
from .induction import (
    SplitCandidate,
    choose_greedy,
    derive_rng,
    grow_greedy,
    grow_stochastic,
    numeric_split_info,
    tdidt,
)
from .tree import (
    DecisionTree,
    Leaf,
    Node,
    NominalSplit,
    NumericSplit,
    default_class,
    tree_size,
)


@dataclass(frozen=True)
class SampleRecord:
    """Outcome of sampling one child subset: the cheapest evaluation seen
    and which sampler produced it."""

    child: int
    best: float
    provenance: str


@dataclass
class AnytimeConfig:
    """Sampling budget and parameters of the anytime learner.

    With ``auto_params`` the information-cost exponent w and the pessimism
    level cf are derived from the cost model's scale; explicit values win
    over derived ones either way.
    """

    r: int = 5
    seed: int = 0
    auto_params: bool = True
    w: float | None = None
    cf: float | None = None
    min_split: int = 2

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("r must be non-negative")
        if self.min_split < 2:
            raise ValueError("min_split must be at least 2")
        if self.cf is not None and not 0.0 < self.cf < 1.0:
            raise ValueError("cf must lie in (0, 1)")
        if self.w is not None and self.w < 0:
            raise ValueError("w must be non-negative")
        if not self.auto_params and (self.w is None or self.cf is None):
            raise ValueError("explicit w and cf are required when auto_params is off")


def _default_sampler(model: CostModel | None, w: float, min_split: int):
    # sample 0 is the greedy information-cost tree, later samples are
    # stochastic draws from the same criterion
    def sampler(ds, rows, avail, ctx, k, rng):
        if k == 0:
            return grow_greedy(ds, rows, avail, "eg2", model, w, ctx, min_split)
        return grow_stochastic(ds, rows, avail, "seg2", rng, model, w, ctx, min_split)

    return sampler


def _top_thresholds(ds: Dataset, rows: np.ndarray, attr: int, r: int) -> np.ndarray:
    """Up to r candidate thresholds, best information gain first; gain ties
    prefer the lower threshold."""
    thresholds, gains, _ = numeric_split_info(ds, rows, attr)
    if len(thresholds) == 0:
        return thresholds
    order = np.argsort(-gains, kind="stable")[: max(r, 1)]
    return thresholds[np.sort(order)]


def act_choose_numeric(
    ds: Dataset,
    rows: np.ndarray,
    attr: int,
    r: int,
    ctx: ChargeContext = EMPTY_CONTEXT,
    model: CostModel | None = None,
    cf: float = 0.25,
    w: float = 1.0,
    seed: int = 0,
    path: tuple = (),
    avail=None,
    sampler=None,
    evaluator=None,
) -> SplitCandidate | None:
    """Best binary cut of one numeric attribute under sampled evaluation.

    The top-r thresholds by information gain each get a single greedy
    sample per side, so a numeric attribute consumes the same budget as a
    nominal one.  A numeric cut does not consume the attribute, so the
    children keep the full available set.  Returns None when the attribute
    admits no cut.
    """
    if model is None:
        raise ValueError("a cost model is required")
    thresholds = _top_thresholds(ds, rows, attr, r)
    if len(thresholds) == 0:
        return None
    m = len(rows)
    cost = context_cost(attr, ctx, model)
    ctx_child = charge(attr, ctx, model)[1]
    if avail is None:
        avail = tuple(range(ds.n_attributes))
    if sampler is None:
        sampler = _default_sampler(model, w, 2)
    if evaluator is None:
        def evaluator(node, child_rows, child_ctx):
            return len(child_rows) / m * total_cost(node, len(child_rows), model, cf, child_ctx).total
    values = ds.column(attr)[rows]
    best: SplitCandidate | None = None
    for thr in thresholds:
        total = cost
        for side, child_rows in enumerate((rows[values <= thr], rows[values > thr])):
            if len(child_rows) == 0:
                continue
            rng = derive_rng(seed, path, attr, float(thr), side, 0)
            subtree = sampler(ds, child_rows, avail, ctx_child, 0, rng)
            total += evaluator(subtree, child_rows, ctx_child)
        if best is None or total < best.score:
            best = SplitCandidate(attr, float(thr), math.nan, cost, total)
    return best


def act_choose(
    ds: Dataset,
    rows: np.ndarray,
    avail,
    r: int,
    ctx: ChargeContext = EMPTY_CONTEXT,
    model: CostModel | None = None,
    cf: float = 0.25,
    w: float = 1.0,
    seed: int = 0,
    path: tuple = (),
    sampler=None,
    evaluator=None,
    records: dict | None = None,
) -> SplitCandidate | None:
    """Pick the split whose cheapest sampled realization costs least.

    A candidate's total is its own context cost plus, per non-empty child,
    the minimum over r sampled subtrees of the child's estimated total
    cost weighted by its training share.  ``sampler`` and ``evaluator``
    are seams for tests; the defaults grow greedy/stochastic
    information-cost trees and price them with ``total_cost`` in the
    child's charge context.  Ties break to the lowest attribute index.
    When ``records`` (a dict) is supplied, it is filled per nominal
    attribute with one SampleRecord per evaluated child.
    """
    if model is None:
        raise ValueError("a cost model is required")
    if r == 0:
        return choose_greedy(ds, rows, avail, "eg2", ctx, model, w)
    m = len(rows)
    if sampler is None:
        sampler = _default_sampler(model, w, 2)
    if evaluator is None:
        def evaluator(node, child_rows, child_ctx):
            return len(child_rows) / m * total_cost(node, len(child_rows), model, cf, child_ctx).total
    best: SplitCandidate | None = None
    for attr in avail:
        a = ds.schema[attr]
        if a.is_numeric:
            cand = act_choose_numeric(
                ds, rows, attr, r, ctx, model, cf, w, seed, path, avail, sampler, evaluator
            )
            if cand is not None and (best is None or cand.score < best.score):
                best = cand
            continue
        codes = ds.column(attr)[rows]
        present = np.unique(codes)
        if len(present) < 2:
            continue
        cost = context_cost(attr, ctx, model)
        ctx_child = charge(attr, ctx, model)[1]
        sub_avail = tuple(x for x in avail if x != attr)
        attr_records: list[SampleRecord] = []
        total = cost
        dead = False
        for v in range(a.arity):
            child_rows = rows[codes == v]
            if len(child_rows) == 0:
                continue
            cheapest = math.inf
            source = ""
            for k in range(r):
                rng = derive_rng(seed, path, attr, v, k)
                subtree = sampler(ds, child_rows, sub_avail, ctx_child, k, rng)
                value = evaluator(subtree, child_rows, ctx_child)
                if value < cheapest:
                    cheapest = value
                    source = "eg2" if k == 0 else f"seg2:{k}"
            attr_records.append(SampleRecord(v, cheapest, source))
            total += cheapest
            if records is None and best is not None and total >= best.score:
                dead = True  # non-negative child contributions only add up
                break
        if records is not None:
            records[attr] = attr_records
        if dead:
            continue
        if best is None or total < best.score:
            best = SplitCandidate(attr, None, math.nan, cost, total)
    return best


def lsid3_choose(
    ds: Dataset, rows: np.ndarray, avail, r: int = 5, seed: int = 0
) -> SplitCandidate | None:
    """Lookahead-by-sampling chooser for the accuracy-oriented anytime
    learner: per child, grow r stochastic gain-driven trees and keep the
    smallest; pick the attribute minimizing the summed minimal sizes.

    r = 0 degenerates to the plain gain criterion.  Numeric attributes
    evaluate their top-r thresholds with one sample per side.
    """
    if r == 0:
        return choose_greedy(ds, rows, avail, "id3")
    best: SplitCandidate | None = None
    for attr in avail:
        a = ds.schema[attr]
        if a.is_numeric:
            thresholds = _top_thresholds(ds, rows, attr, r)
            if len(thresholds) == 0:
                continue
            values = ds.column(attr)[rows]
            cand = None
            for thr in thresholds:
                size = 0
                for side, child_rows in enumerate((rows[values <= thr], rows[values > thr])):
                    if len(child_rows) == 0:
                        continue
                    rng = derive_rng(seed, attr, float(thr), side, 0)
                    size += tree_size(grow_stochastic(ds, child_rows, avail, "sid3", rng))
                if cand is None or size < cand.score:
                    cand = SplitCandidate(attr, float(thr), math.nan, 0.0, size)
        else:
            codes = ds.column(attr)[rows]
            if len(np.unique(codes)) < 2:
                continue
            sub_avail = tuple(x for x in avail if x != attr)
            total = 0
            for v in range(a.arity):
                child_rows = rows[codes == v]
                if len(child_rows) == 0:
                    continue
                smallest = math.inf
                for k in range(r):
                    rng = derive_rng(seed, attr, v, k)
                    smallest = min(
                        smallest, tree_size(grow_stochastic(ds, child_rows, sub_avail, "sid3", rng))
                    )
                total += smallest
            cand = SplitCandidate(attr, None, math.nan, 0.0, total)
        if cand is not None and (best is None or cand.score < best.score):
            best = cand
    return best


# -- cost-sensitive pruning -----------------------------------------------------


def cost_sensitive_prune(
    tree: Node | DecisionTree,
    model: CostModel,
    cf: float = 0.25,
    ctx: ChargeContext = EMPTY_CONTEXT,
):
    """Bottom-up pruning by total cost: a subtree survives only if its
    per-example test plus misclassification estimate undercuts the leaf
    that would replace it.

    The leaf side prices its pessimistic error count at the mean
    off-diagonal misclassification cost.  Comparison contexts follow the
    path, so tests already paid for above the subtree stay discounted.
    Pruning is idempotent.
    """
    if isinstance(tree, DecisionTree):
        return DecisionTree(
            cost_sensitive_prune(tree.root, model, cf, ctx), tree.schema, tree.classes
        )
    node = tree
    if isinstance(node, Leaf):
        return node
    ctx_child = charge(node.attr, ctx, model)[1]
    if isinstance(node, NominalSplit):
        rebuilt: Node = NominalSplit(
            node.attr,
            tuple(cost_sensitive_prune(c, model, cf, ctx_child) for c in node.children),
            node.counts,
        )
    else:
        rebuilt = NumericSplit(
            node.attr,
            node.threshold,
            cost_sensitive_prune(node.low, model, cf, ctx_child),
            cost_sensitive_prune(node.high, model, cf, ctx_child),
            node.counts,
        )
    m = int(node.counts.sum())
    if m == 0:
        return rebuilt
    label = default_class(node.counts, model)
    s = m - int(node.counts[label])
    off = model.offdiagonal()
    leaf_cost = expected_error(m, s, cf) * float(off.mean() if off.size else 0.0) / m
    if leaf_cost <= total_cost(rebuilt, m, model, cf, ctx).total:
        return Leaf(label, node.counts)
    return rebuilt


# -- front door -------------------------------------------------------------------


def act_induce(ds: Dataset, model: CostModel, config: AnytimeConfig) -> DecisionTree:
    """Grow a tree with the sampled-lookahead chooser, then prune it
    cost-sensitively.  One (w, cf) pair, derived from the model's scale
    unless overridden, drives both growth and pruning."""
    if model is None:
        raise CostTreeError("the anytime learner needs a cost model")
    if config.auto_params and (config.w is None or config.cf is None):
        scale = problem_scale(model)
        w = scale.w if config.w is None else config.w
        cf = scale.cf if config.cf is None else config.cf
    else:
        w = config.w
        cf = config.cf

    def chooser(ds_, rows_, avail_, ctx_, path_):
        return act_choose(
            ds_, rows_, avail_, config.r, ctx_, model, cf, w, config.seed, path_
        )

    rows = np.arange(len(ds))
    avail = tuple(range(ds.n_attributes))
    root = tdidt(ds, rows, avail, chooser, model, config.min_split)
    root = cost_sensitive_prune(root, model, cf)
    return DecisionTree(root, ds.schema, ds.classes)


def lsid3_induce(ds: Dataset, config: AnytimeConfig) -> DecisionTree:
    """Accuracy-oriented anytime induction (no cost model, no pruning)."""

    def chooser(ds_, rows_, avail_, ctx_, path_):
        return lsid3_choose(ds_, rows_, avail_, config.r, _path_seed(config.seed, path_))

    rows = np.arange(len(ds))
    avail = tuple(range(ds.n_attributes))
    root = tdidt(ds, rows, avail, chooser, None, config.min_split)
    return DecisionTree(root, ds.schema, ds.classes)


def _path_seed(seed: int, path: tuple) -> int:
    return int(derive_rng(seed, path).integers(0, 2 ** 63))
