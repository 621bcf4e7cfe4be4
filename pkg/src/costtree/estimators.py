"""Scikit-learn style estimators wrapping the inducers.

These follow the estimator protocol (constructor parameters stored
verbatim, ``get_params``/``set_params``/``clone`` compatible, fitted state
in trailing-underscore attributes) but fit from a Dataset and an optional
CostModel rather than an (X, y) matrix pair, because splits, charges, and
labels all live in the dataset's schema.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .act import AnytimeConfig, act_induce, lsid3_induce
from .costs import CostModel
from .dataset import Dataset
from .induction import GREEDY_CRITERIA, STOCHASTIC_CRITERIA, InducerConfig, induce
from .tree import classify
from .validation import check_cost_model, check_dataset, check_is_fitted, iter_examples


class BaseTreeClassifier(ClassifierMixin, BaseEstimator):
    """Shared fit/predict plumbing; subclasses build one DecisionTree."""

    def _induce(self, ds: Dataset, model: CostModel | None):
        raise NotImplementedError

    def fit(self, dataset: Dataset, cost_model: CostModel | None = None):
        ds = check_dataset(dataset)
        model = check_cost_model(cost_model, ds) if cost_model is not None else None
        self.tree_ = self._induce(ds, model)
        self.cost_model_ = model
        self.classes_ = np.asarray(ds.classes)
        self.n_features_in_ = ds.n_attributes
        return self

    def predict(self, X):
        check_is_fitted(self)
        return np.asarray([
            classify(self.tree_, ex, None)[0] for ex in iter_examples(X, self.tree_.schema)
        ])

    def predict_with_charge(self, X, cost_model: CostModel | None = None):
        """Predicted labels plus the charged test cost of each path."""
        check_is_fitted(self)
        model = cost_model if cost_model is not None else self.cost_model_
        labels = []
        charges = []
        for ex in iter_examples(X, self.tree_.schema):
            label, pc = classify(self.tree_, ex, model)
            labels.append(label)
            charges.append(pc)
        return labels, charges


class GreedyTreeClassifier(BaseTreeClassifier):
    """Single-pass induction with a greedy criterion: plain information
    gain or one of the gain/cost trade-offs.  Prunes error-based by
    default."""

    def __init__(self, criterion: str = "eg2", w: float = 1.0, cf: float = 0.25,
                 min_split: int = 2, prune: bool | None = None):
        self.criterion = criterion
        self.w = w
        self.cf = cf
        self.min_split = min_split
        self.prune = prune

    def _induce(self, ds, model):
        if self.criterion not in GREEDY_CRITERIA:
            raise ValueError(f"unknown greedy criterion {self.criterion!r}")
        config = InducerConfig(self.criterion, self.w, self.cf, 0, self.min_split, self.prune)
        return induce(ds, model, config)


class StochasticTreeClassifier(BaseTreeClassifier):
    """Single-pass induction with a stochastic criterion (gain- or
    score-proportional attribute draws).  Unpruned by default."""

    def __init__(self, criterion: str = "sid3", w: float = 1.0, cf: float = 0.25,
                 min_split: int = 2, prune: bool | None = None, seed: int = 0):
        self.criterion = criterion
        self.w = w
        self.cf = cf
        self.min_split = min_split
        self.prune = prune
        self.seed = seed

    def _induce(self, ds, model):
        if self.criterion not in STOCHASTIC_CRITERIA:
            raise ValueError(f"unknown stochastic criterion {self.criterion!r}")
        config = InducerConfig(self.criterion, self.w, self.cf, self.seed, self.min_split, self.prune)
        return induce(ds, model, config)


class DTMCClassifier(BaseTreeClassifier):
    """Direct total-cost minimization: split while the immediate cost
    reduction is positive, never prune."""

    def __init__(self, min_split: int = 2):
        self.min_split = min_split

    def _induce(self, ds, model):
        if model is None:
            raise ValueError("this classifier needs a cost model")
        config = InducerConfig("dtmc", min_split=self.min_split)
        return induce(ds, model, config)


class LSID3Classifier(BaseTreeClassifier):
    """Accuracy-oriented anytime induction: r sampled lookahead trees per
    child, smallest-tree preference, no cost model involved."""

    def __init__(self, r: int = 5, seed: int = 0, min_split: int = 2):
        self.r = r
        self.seed = seed
        self.min_split = min_split

    def _induce(self, ds, model):
        config = AnytimeConfig(r=self.r, seed=self.seed, min_split=self.min_split)
        return lsid3_induce(ds, config)


class ACTClassifier(BaseTreeClassifier):
    """Cost-sensitive anytime induction: sampled lookahead by estimated
    total cost plus cost-sensitive pruning.  w and cf derive from the
    cost model unless given explicitly."""

    def __init__(self, r: int = 5, seed: int = 0, w: float | None = None,
                 cf: float | None = None, min_split: int = 2):
        self.r = r
        self.seed = seed
        self.w = w
        self.cf = cf
        self.min_split = min_split

    def _induce(self, ds, model):
        if model is None:
            raise ValueError("this classifier needs a cost model")
        config = AnytimeConfig(
            r=self.r, seed=self.seed, auto_params=True,
            w=self.w, cf=self.cf, min_split=self.min_split,
        )
        return act_induce(ds, model, config)


ALGORITHMS = ("id3", "eg2", "idx", "csid3", "sid3", "seg2", "dtmc", "lsid3", "act")


def make_classifier(
    algo: str,
    r: int = 5,
    seed: int = 0,
    w: float | None = None,
    cf: float | None = None,
    min_split: int = 2,
    prune: bool | None = None,
) -> BaseTreeClassifier:
    """Estimator for an algorithm name as used by the command line."""
    algo = algo.lower()
    if algo in GREEDY_CRITERIA:
        return GreedyTreeClassifier(
            criterion=algo, w=1.0 if w is None else w, cf=0.25 if cf is None else cf,
            min_split=min_split, prune=prune,
        )
    if algo in STOCHASTIC_CRITERIA:
        return StochasticTreeClassifier(
            criterion=algo, w=1.0 if w is None else w, cf=0.25 if cf is None else cf,
            min_split=min_split, prune=prune, seed=seed,
        )
    if algo == "dtmc":
        return DTMCClassifier(min_split=min_split)
    if algo == "lsid3":
        return LSID3Classifier(r=r, seed=seed, min_split=min_split)
    if algo == "act":
        return ACTClassifier(r=r, seed=seed, w=w, cf=cf, min_split=min_split)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
