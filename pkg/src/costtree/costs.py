"""Cost model: per-test prices, shared-group discounts, misclassification matrix.

Charging is context-sensitive: a test already administered along the current
path is free, and every group member after the first pays the group's
discounted price.  Totals therefore depend only on the *set* of tests
administered, not on their order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .dataset import Attribute, Dataset
from .errors import DataFormatError


@dataclass(frozen=True)
class CostModel:
    """Prices for a fixed attribute schema and class set.

    ``group_of[j]`` is the group index of attribute j, or -1 for ungrouped
    tests.  ``matrix[i, k]`` is the cost of predicting class k when the
    true class is i; the diagonal is zero.
    """

    attr_names: tuple[str, ...]
    class_names: tuple[str, ...]
    test_costs: np.ndarray
    group_of: np.ndarray
    group_discounts: np.ndarray
    group_names: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "test_costs", np.asarray(self.test_costs, dtype=np.float64))
        object.__setattr__(self, "group_of", np.asarray(self.group_of, dtype=np.int64))
        object.__setattr__(self, "group_discounts", np.asarray(self.group_discounts, dtype=np.float64))
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=np.float64))
        n = len(self.attr_names)
        c = len(self.class_names)
        if self.test_costs.shape != (n,) or self.group_of.shape != (n,):
            raise DataFormatError("cost arrays do not match the attribute count")
        if self.group_discounts.shape != (len(self.group_names),):
            raise DataFormatError("group discount count does not match group names")
        if self.matrix.shape != (c, c):
            raise DataFormatError("misclassification matrix must be |classes| square")
        if np.any(self.test_costs < 0):
            raise DataFormatError("test costs must be non-negative")
        if np.any(self.matrix < 0):
            raise DataFormatError("misclassification costs must be non-negative")
        if np.any(np.diagonal(self.matrix) != 0):
            raise DataFormatError("matrix diagonal must be zero")
        if len(self.group_names) != len(set(self.group_names)):
            raise DataFormatError("duplicate group name")
        for g in range(len(self.group_names)):
            members = np.flatnonzero(self.group_of == g)
            if len(members) == 0:
                continue
            if self.group_discounts[g] < 0:
                raise DataFormatError("group discount must be non-negative")
            if self.group_discounts[g] >= self.test_costs[members].min():
                raise DataFormatError(
                    f"group {self.group_names[g]!r} discount must be below its "
                    "cheapest member's base cost"
                )
        if self.group_of.size and (self.group_of.min() < -1 or self.group_of.max() >= len(self.group_names)):
            raise DataFormatError("group index out of range")
        for arr in (self.test_costs, self.group_of, self.group_discounts, self.matrix):
            arr.setflags(write=False)
        off = self.matrix[~np.eye(c, dtype=bool)]
        uniform = 0.0 if off.size == 0 else (float(off[0]) if np.ptp(off) == 0 else None)
        object.__setattr__(self, "_uniform_mc", uniform)

    # -- convenience --------------------------------------------------------

    @property
    def n_attributes(self) -> int:
        return len(self.attr_names)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_index(self, label: str | int) -> int:
        if isinstance(label, str):
            try:
                return self.class_names.index(label)
            except ValueError:
                raise KeyError(f"unknown class {label!r}") from None
        if not 0 <= int(label) < self.n_classes:
            raise KeyError(f"class index {label} out of range")
        return int(label)

    def offdiagonal(self) -> np.ndarray:
        c = self.n_classes
        return self.matrix[~np.eye(c, dtype=bool)]

    def uniform_mc(self) -> float | None:
        """The shared off-diagonal value if the matrix is uniform, else None."""
        return self._uniform_mc

    @staticmethod
    def build(
        schema: Sequence[Attribute] | Dataset,
        classes: Sequence[str] | None = None,
        test_costs: Mapping[str, float] | Sequence[float] | float = 0.0,
        matrix: np.ndarray | float = 0.0,
        groups: Mapping[str, tuple[Sequence[str], float]] | None = None,
    ) -> "CostModel":
        """Assemble a model from friendly pieces.

        ``test_costs`` may be a scalar (applied to every attribute), a
        sequence in schema order, or a name-keyed mapping.  ``matrix`` may
        be a scalar, giving a uniform cost for every misclassification.
        ``groups`` maps group name -> (member names, discount_amount).
        """
        if isinstance(schema, Dataset):
            if classes is None:
                classes = schema.classes
            schema = schema.schema
        if classes is None:
            raise ValueError("classes are required when schema is not a Dataset")
        attr_names = tuple(a.name for a in schema)
        n = len(attr_names)
        c = len(classes)
        if isinstance(test_costs, Mapping):
            unknown = set(test_costs) - set(attr_names)
            if unknown:
                raise DataFormatError(f"unknown attribute in test costs: {sorted(unknown)}")
            costs = np.array([float(test_costs.get(a, 0.0)) for a in attr_names])
        elif np.isscalar(test_costs):
            costs = np.full(n, float(test_costs))
        else:
            costs = np.asarray(test_costs, dtype=np.float64)
        if np.isscalar(matrix):
            m = np.full((c, c), float(matrix))
            np.fill_diagonal(m, 0.0)
        else:
            m = np.asarray(matrix, dtype=np.float64)
        group_of = np.full(n, -1, dtype=np.int64)
        group_names: list[str] = []
        discounts: list[float] = []
        if groups:
            for gname, (members, disc) in groups.items():
                g = len(group_names)
                group_names.append(gname)
                discounts.append(float(disc))
                for mname in members:
                    if mname not in attr_names:
                        raise DataFormatError(f"unknown attribute {mname!r} in group {gname!r}")
                    j = attr_names.index(mname)
                    if group_of[j] != -1:
                        raise DataFormatError(f"attribute {mname!r} is in two groups")
                    group_of[j] = g
        return CostModel(
            attr_names=attr_names,
            class_names=tuple(classes),
            test_costs=costs,
            group_of=group_of,
            group_discounts=np.asarray(discounts, dtype=np.float64),
            group_names=tuple(group_names),
            matrix=m,
        )


def with_matrix(model: CostModel, matrix) -> CostModel:
    """Same prices, different misclassification matrix.  A scalar fills
    every off-diagonal entry."""
    c = model.n_classes
    if np.isscalar(matrix):
        m = np.full((c, c), float(matrix))
        np.fill_diagonal(m, 0.0)
    else:
        m = np.asarray(matrix, dtype=np.float64)
    return replace(model, matrix=m)


@dataclass(frozen=True)
class ChargeContext:
    """Which tests were already administered and which groups already paid
    a full-price member along the current path."""

    administered: frozenset = field(default_factory=frozenset)
    charged_groups: frozenset = field(default_factory=frozenset)


EMPTY_CONTEXT = ChargeContext()


def _check_attr(attr: int, model: CostModel) -> None:
    if not 0 <= attr < model.n_attributes:
        raise KeyError(f"unknown attribute index {attr}")


def context_cost(attr: int, ctx: ChargeContext, model: CostModel) -> float:
    """Marginal price of administering ``attr`` in context ``ctx``.

    Already-administered tests are free; a group member whose group
    already charged a full-price member pays base minus the group
    discount.
    """
    _check_attr(attr, model)
    if attr in ctx.administered:
        return 0.0
    base = float(model.test_costs[attr])
    g = int(model.group_of[attr])
    if g >= 0 and g in ctx.charged_groups:
        return base - float(model.group_discounts[g])
    return base


def charge(attr: int, ctx: ChargeContext, model: CostModel) -> tuple[float, ChargeContext]:
    """Charge for ``attr`` and return (price paid, updated context)."""
    price = context_cost(attr, ctx, model)
    if attr in ctx.administered:
        return 0.0, ctx
    administered = ctx.administered | {attr}
    g = int(model.group_of[attr])
    charged = ctx.charged_groups | {g} if g >= 0 else ctx.charged_groups
    return price, ChargeContext(administered, charged)


def charge_set(attrs, model: CostModel, ctx: ChargeContext = EMPTY_CONTEXT) -> float:
    """Total price of administering a collection of tests (order-free)."""
    total = 0.0
    for a in attrs:
        price, ctx = charge(a, ctx, model)
        total += price
    return total


def misclassification_cost(predicted: str | int, actual: str | int, model: CostModel) -> float:
    """matrix[actual, predicted]; zero when they agree."""
    i = model.class_index(actual)
    k = model.class_index(predicted)
    return float(model.matrix[i, k])


# -- JSON file form -----------------------------------------------------------
#
# {"tests": [{"name": ..., "cost": ..., "group": ...?}, ...],
#  "groups": [{"name": ..., "discount_amount": ...}, ...],
#  "matrix": [[...], ...]}
#
# Matrix rows are the true class, columns the predicted class, both in the
# dataset's class order.


def load_cost_model(path: str | Path, dataset: Dataset) -> CostModel:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(raw, dict):
        raise DataFormatError(f"{path}: expected a JSON object")
    tests = raw.get("tests")
    matrix = raw.get("matrix")
    if not isinstance(tests, list) or matrix is None:
        raise DataFormatError(f"{path}: need 'tests' and 'matrix'")
    groups_raw = raw.get("groups", [])
    group_names = []
    discounts = {}
    for g in groups_raw:
        if not isinstance(g, dict) or "name" not in g or "discount_amount" not in g:
            raise DataFormatError(f"{path}: malformed group entry")
        group_names.append(str(g["name"]))
        discounts[str(g["name"])] = float(g["discount_amount"])
    attr_names = tuple(a.name for a in dataset.schema)
    costs = np.zeros(len(attr_names))
    group_of = np.full(len(attr_names), -1, dtype=np.int64)
    seen = set()
    for t in tests:
        if not isinstance(t, dict) or "name" not in t or "cost" not in t:
            raise DataFormatError(f"{path}: malformed test entry")
        name = str(t["name"])
        if name not in attr_names:
            raise DataFormatError(f"{path}: test {name!r} is not a dataset attribute")
        if name in seen:
            raise DataFormatError(f"{path}: duplicate test entry {name!r}")
        seen.add(name)
        j = attr_names.index(name)
        costs[j] = float(t["cost"])
        if "group" in t and t["group"] is not None:
            gname = str(t["group"])
            if gname not in group_names:
                raise DataFormatError(f"{path}: test {name!r} names unknown group {gname!r}")
            group_of[j] = group_names.index(gname)
    missing = set(attr_names) - seen
    if missing:
        raise DataFormatError(f"{path}: no cost given for {sorted(missing)}")
    m = np.asarray(matrix, dtype=np.float64)
    if m.shape != (len(dataset.classes), len(dataset.classes)):
        raise DataFormatError(
            f"{path}: matrix must be {len(dataset.classes)}x{len(dataset.classes)} "
            "in the dataset's class order"
        )
    return CostModel(
        attr_names=attr_names,
        class_names=dataset.classes,
        test_costs=costs,
        group_of=group_of,
        group_discounts=np.array([discounts[g] for g in group_names]),
        group_names=tuple(group_names),
        matrix=m,
    )


def save_cost_model(model: CostModel, path: str | Path) -> None:
    tests = []
    for j, name in enumerate(model.attr_names):
        entry: dict = {"name": name, "cost": float(model.test_costs[j])}
        g = int(model.group_of[j])
        if g >= 0:
            entry["group"] = model.group_names[g]
        tests.append(entry)
    payload = {
        "tests": tests,
        "groups": [
            {"name": n, "discount_amount": float(d)}
            for n, d in zip(model.group_names, model.group_discounts)
        ],
        "matrix": [[float(v) for v in row] for row in model.matrix],
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
