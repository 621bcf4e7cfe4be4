"""Input validation helpers for the estimator layer."""

from __future__ import annotations

from sklearn.exceptions import NotFittedError

from .costs import CostModel
from .dataset import Dataset, Example
from .errors import DataFormatError


def check_dataset(ds, require_examples: bool = True) -> Dataset:
    if not isinstance(ds, Dataset):
        raise TypeError(f"expected a Dataset, got {type(ds).__name__}")
    if require_examples and len(ds) == 0:
        raise ValueError("dataset has no examples")
    return ds


def check_cost_model(model, ds: Dataset) -> CostModel:
    """A model is usable with a dataset when attribute and class orders agree."""
    if not isinstance(model, CostModel):
        raise TypeError(f"expected a CostModel, got {type(model).__name__}")
    names = tuple(a.name for a in ds.schema)
    if model.attr_names != names:
        raise DataFormatError(
            f"cost model attributes {model.attr_names} do not match dataset {names}"
        )
    if model.class_names != ds.classes:
        raise DataFormatError(
            f"cost model classes {model.class_names} do not match dataset {ds.classes}"
        )
    return model


def check_is_fitted(estimator, attribute: str = "tree_") -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit first"
        )


def iter_examples(X, schema):
    """Yield classifiable examples from a Dataset or a plain sequence."""
    if isinstance(X, Dataset):
        if tuple(a.name for a in X.schema) != tuple(a.name for a in schema):
            raise DataFormatError("dataset schema does not match the fitted schema")
        for i in range(len(X)):
            yield X.example(i)
        return
    for item in X:
        if isinstance(item, Example):
            yield item
        else:
            yield Example(tuple(item), "")
