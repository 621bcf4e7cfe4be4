"""Benchmark protocol: normalized cost, stratified cross-validation, and
paired significance tests.

Normalized cost divides the average per-instance cost of a classifier by
the problem's standard cost (the price of administering every test plus
the best single-class error penalty), making scores comparable across
problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from sklearn.base import clone

from .costs import CostModel, misclassification_cost
from .dataset import Dataset
from .errors import DataFormatError
from .estimate import total_test_cost
from .induction import derive_rng
from .tree import tree_size


def standard_cost(model: CostModel, class_frequencies) -> float:
    """TC + min_i(1 - f_i) * max(M): every test once, plus the error
    penalty of always predicting the most frequent class."""
    f = np.asarray(class_frequencies, dtype=np.float64)
    if len(f) != model.n_classes:
        raise ValueError("frequency vector length must match the class count")
    if abs(float(f.sum()) - 1.0) > 1e-9:
        raise ValueError("class frequencies must sum to 1")
    tc = total_test_cost(model)
    return tc + float((1.0 - f).min()) * float(model.matrix.max())


def normalized_cost(avg_cost: float, std_cost: float) -> float:
    """Ratio of an average per-instance cost to the standard cost.
    May exceed 1; never clamped."""
    if std_cost <= 0:
        raise ValueError("standard cost must be positive")
    return avg_cost / std_cost


def stratified_kfold(ds: Dataset, k: int = 10, seed: int = 0) -> list[np.ndarray]:
    """Disjoint test folds covering the data, sizes within 1 of each other
    and per-class counts within 1 across folds.

    Each class's examples are shuffled, then dealt round-robin to folds
    with a cursor that keeps running across classes, balancing both the
    fold sizes and the per-class proportions.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if len(ds) < k:
        raise ValueError("fewer examples than folds")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for c in range(len(ds.classes)):
        idx = np.flatnonzero(ds.y == c)
        rng.shuffle(idx)
        for i in idx:
            folds[cursor % k].append(int(i))
            cursor += 1
    return [np.sort(np.asarray(f, dtype=np.int64)) for f in folds]


@dataclass(frozen=True)
class FoldResult:
    avg_cost: float
    accuracy: float
    tree_size: int


@dataclass(frozen=True)
class EvalReport:
    folds: tuple[FoldResult, ...]
    standard_cost: float
    mean_normalized_cost: float
    ci_halfwidth: float
    mean_accuracy: float
    mean_tree_size: float

    @property
    def normalized_costs(self) -> np.ndarray:
        return np.array([f.avg_cost for f in self.folds]) / self.standard_cost


def kfold_cv(
    ds: Dataset, model: CostModel, inducer, k: int = 10, seed: int = 0
) -> EvalReport:
    """Stratified k-fold evaluation of one inducer.

    The partition depends only on (dataset, k, seed), so different
    inducers evaluated with the same seed see identical train/test splits.
    Each test example is charged its classification path plus the
    misclassification penalty of the predicted label.
    """
    test_folds = stratified_kfold(ds, k, seed)
    all_rows = np.arange(len(ds))
    base_seed = inducer.get_params().get("seed", 0) if hasattr(inducer, "get_params") else 0
    results = []
    for f, test_rows in enumerate(test_folds):
        train_rows = np.setdiff1d(all_rows, test_rows)
        if len(train_rows) == 0:
            raise ValueError("a fold left no training examples")
        train = ds.select(train_rows)
        test = ds.select(test_rows)
        est = clone(inducer)
        params = est.get_params()
        if "seed" in params:
            est.set_params(seed=int(derive_rng(base_seed, "fold", seed, f).integers(0, 2 ** 31)))
        est.fit(train, model)
        labels, charges = est.predict_with_charge(test)
        total = 0.0
        hits = 0
        for i in range(len(test)):
            actual = test.classes[int(test.y[i])]
            total += charges[i].total + misclassification_cost(labels[i], actual, model)
            hits += labels[i] == actual
        results.append(
            FoldResult(total / len(test), hits / len(test), tree_size(est.tree_))
        )
    std = standard_cost(model, ds.class_frequencies())
    norm = np.array([normalized_cost(r.avg_cost, std) for r in results])
    if len(norm) > 1:
        half = float(stats.t.ppf(0.975, len(norm) - 1) * norm.std(ddof=1) / math.sqrt(len(norm)))
    else:
        half = 0.0
    return EvalReport(
        folds=tuple(results),
        standard_cost=std,
        mean_normalized_cost=float(norm.mean()),
        ci_halfwidth=half,
        mean_accuracy=float(np.mean([r.accuracy for r in results])),
        mean_tree_size=float(np.mean([r.tree_size for r in results])),
    )


# -- significance tests ---------------------------------------------------------


def paired_ttest(costs_a, costs_b, alpha: float = 0.05) -> tuple[int | None, float]:
    """Two-sided paired t-test on per-fold costs.

    Returns (winner, p): winner is 0 if the first list is significantly
    cheaper at p < alpha, 1 if the second is, None otherwise.  A zero-
    variance, zero-mean difference gives p = 1; a zero-variance nonzero
    difference is treated as certain (p = 0).
    """
    a = np.asarray(costs_a, dtype=np.float64)
    b = np.asarray(costs_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or len(a) < 2:
        raise ValueError("need two equal-length lists of at least 2 values")
    d = a - b
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        p = 1.0 if mean == 0.0 else 0.0
    else:
        t = mean / (sd / math.sqrt(len(d)))
        p = 2.0 * float(stats.t.sf(abs(t), len(d) - 1))
    if p < alpha and mean != 0.0:
        return (0 if mean < 0 else 1), p
    return None, p


def wilcoxon(pairs, alpha: float = 0.05) -> tuple[int | None, float]:
    """Wilcoxon signed-rank test over paired scores (e.g. one pair per
    dataset), normal approximation with continuity correction.

    Zero differences are dropped; tied magnitudes share mid-ranks.  All
    ties give (None, 1).  Returns (winner, p) with winner = 0 when the
    first member of the pairs is significantly lower.
    """
    diffs = np.array([float(a) - float(b) for a, b in pairs], dtype=np.float64)
    diffs = diffs[diffs != 0.0]
    n = len(diffs)
    if n == 0:
        return None, 1.0
    ranks = stats.rankdata(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())
    mu = n * (n + 1) / 4.0
    sigma = math.sqrt(n * (n + 1) * (2 * n + 1) / 24.0)
    if sigma == 0.0:
        return None, 1.0
    delta = w_plus - mu
    if delta == 0.0:
        return None, 1.0
    z = (delta - 0.5 * math.copysign(1.0, delta)) / sigma
    p = min(1.0, 2.0 * float(stats.norm.sf(abs(z))))
    if p < alpha:
        # positive differences mean the first member cost more
        return (1 if delta > 0 else 0), p
    return None, p


@dataclass(frozen=True)
class ComparisonResult:
    """Aggregate comparison of two methods across datasets."""

    methods: tuple[str, str]
    per_dataset_p: dict
    win_counts: tuple[int, int]
    wilcoxon_p: float | None

    def __post_init__(self):
        for p in self.per_dataset_p.values():
            if not 0.0 <= p <= 1.0:
                raise ValueError("p-values must lie in [0, 1]")


def compare_methods(
    name_a: str, name_b: str, per_dataset: dict, alpha: float = 0.05
) -> ComparisonResult:
    """Per-dataset paired t-tests plus a Wilcoxon over per-dataset means.

    ``per_dataset`` maps dataset name -> (per-fold costs of a, of b).
    The Wilcoxon p is None with fewer than two datasets.
    """
    per_p = {}
    wins = [0, 0]
    mean_pairs = []
    for name, (ca, cb) in per_dataset.items():
        winner, p = paired_ttest(ca, cb, alpha)
        per_p[name] = p
        if winner is not None:
            wins[winner] += 1
        mean_pairs.append((float(np.mean(ca)), float(np.mean(cb))))
    wp = wilcoxon(mean_pairs, alpha)[1] if len(mean_pairs) >= 2 else None
    return ComparisonResult((name_a, name_b), per_p, (wins[0], wins[1]), wp)
