"""Decision tree structure, classification with path charging, text form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .costs import ChargeContext, CostModel, EMPTY_CONTEXT, charge
from .dataset import Attribute, Dataset, Example
from .errors import DataFormatError


@dataclass(eq=False)
class Leaf:
    label: int
    counts: np.ndarray


@dataclass(eq=False)
class NominalSplit:
    attr: int
    children: tuple
    counts: np.ndarray


@dataclass(eq=False)
class NumericSplit:
    attr: int
    threshold: float
    low: "Node"   # examples with value <= threshold
    high: "Node"
    counts: np.ndarray


Node = Union[Leaf, NominalSplit, NumericSplit]


@dataclass(eq=False)
class DecisionTree:
    """A root node bound to the schema and class order it was built for."""

    root: Node
    schema: tuple[Attribute, ...]
    classes: tuple[str, ...]


class PathCharge(NamedTuple):
    tests: frozenset
    total: float


def default_class(counts: np.ndarray, model: CostModel | None = None) -> int:
    """Cheapest class to predict at a leaf with the given class counts.

    Under a uniform matrix this is the majority class; otherwise the class
    minimizing the count-weighted misclassification cost.  Ties break to
    the lowest class index.
    """
    counts = np.asarray(counts)
    if model is None or model.uniform_mc() is not None:
        return int(np.argmax(counts))
    # expected penalty of predicting k: sum_i counts[i] * matrix[i, k]
    penalties = counts @ model.matrix
    return int(np.argmin(penalties))


def children_of(node: Node) -> tuple:
    if isinstance(node, Leaf):
        return ()
    if isinstance(node, NominalSplit):
        return node.children
    return (node.low, node.high)


def tree_size(node: Node | DecisionTree) -> int:
    """Total number of nodes, leaves included."""
    if isinstance(node, DecisionTree):
        node = node.root
    return 1 + sum(tree_size(c) for c in children_of(node))


def iter_leaves(node: Node):
    if isinstance(node, Leaf):
        yield node
        return
    for c in children_of(node):
        yield from iter_leaves(c)


def classify(
    tree: DecisionTree, example: Example | tuple, model: CostModel | None = None
) -> tuple[str, PathCharge]:
    """Route an example to a leaf.

    Returns the predicted class symbol and the context-charged cost of the
    tests along the path.  Repeated tests (a numeric attribute cut twice)
    are charged once; with no model the charge is zero.
    """
    values = example.values if isinstance(example, Example) else tuple(example)
    if len(values) != len(tree.schema):
        raise DataFormatError(
            f"example has {len(values)} values, expected {len(tree.schema)}"
        )
    node = tree.root
    ctx = EMPTY_CONTEXT
    total = 0.0
    tests = set()
    while not isinstance(node, Leaf):
        a = tree.schema[node.attr]
        tests.add(node.attr)
        if model is not None:
            price, ctx = charge(node.attr, ctx, model)
            total += price
        if isinstance(node, NominalSplit):
            node = node.children[a.code_of(values[node.attr])]
        else:
            v = float(values[node.attr])
            node = node.low if v <= node.threshold else node.high
    return tree.classes[node.label], PathCharge(frozenset(tests), total)


def average_tcost(
    tree: DecisionTree, examples: Dataset | Sequence[Example], model: CostModel
) -> float:
    """Mean charged test cost over a non-empty example collection."""
    if isinstance(examples, Dataset):
        examples = [examples.example(i) for i in range(len(examples))]
    if not len(examples):
        raise ValueError("average_tcost needs at least one example")
    total = 0.0
    for ex in examples:
        _, pc = classify(tree, ex, model)
        total += pc.total
    return total / len(examples)


# -- text form ----------------------------------------------------------------
#
# One node per line, two-space indentation per depth.  Internal nodes list
# one branch line per child: "name=value" for nominal tests, "name<=thr"
# and "name>thr" for numeric ones.  Leaves are "leaf label n1 n2 ..." with
# training counts in class order.  Numbers use repr, so a round trip is
# exact.


def _fmt_threshold(v: float) -> str:
    return repr(float(v))


def _write_node(node: Node, schema, classes, depth: int, out: list) -> None:
    pad = "  " * depth
    if isinstance(node, Leaf):
        counts = " ".join(str(int(c)) for c in node.counts)
        out.append(f"{pad}leaf {classes[node.label]} {counts}")
        return
    if isinstance(node, NominalSplit):
        a = schema[node.attr]
        for value, child in zip(a.domain, node.children):
            out.append(f"{pad}{a.name}={value}")
            _write_node(child, schema, classes, depth + 1, out)
    else:
        a = schema[node.attr]
        out.append(f"{pad}{a.name}<={_fmt_threshold(node.threshold)}")
        _write_node(node.low, schema, classes, depth + 1, out)
        out.append(f"{pad}{a.name}>{_fmt_threshold(node.threshold)}")
        _write_node(node.high, schema, classes, depth + 1, out)


def tree_to_text(tree: DecisionTree) -> str:
    out: list = []
    _write_node(tree.root, tree.schema, tree.classes, 0, out)
    return "\n".join(out) + "\n"


def _leaf_counts_total(node: Node) -> np.ndarray:
    return node.counts


def tree_from_text(text: str, schema: Sequence[Attribute], classes: Sequence[str]) -> DecisionTree:
    schema = tuple(schema)
    classes = tuple(classes)
    by_name = {a.name: a for a in schema}
    lines = [ln for ln in text.splitlines() if ln.strip()]
    pos = 0

    def parse_depth(line: str) -> int:
        n = len(line) - len(line.lstrip(" "))
        if n % 2:
            raise DataFormatError("odd indentation in tree text")
        return n // 2

    def parse(depth: int) -> Node:
        nonlocal pos
        if pos >= len(lines):
            raise DataFormatError("unexpected end of tree text")
        line = lines[pos]
        if parse_depth(line) != depth:
            raise DataFormatError(f"bad indentation at line {pos + 1}")
        body = line.strip()
        if body.startswith("leaf "):
            pos += 1
            parts = body.split()
            if len(parts) != 2 + len(classes):
                raise DataFormatError(f"bad leaf line: {body!r}")
            label = parts[1]
            if label not in classes:
                raise DataFormatError(f"unknown class {label!r} in tree text")
            counts = np.array([int(v) for v in parts[2:]], dtype=np.int64)
            return Leaf(classes.index(label), counts)
        if "<=" in body:
            name, thr_text = body.split("<=", 1)
            a = by_name.get(name)
            if a is None or not a.is_numeric:
                raise DataFormatError(f"bad numeric test {body!r}")
            threshold = float(thr_text)
            pos += 1
            low = parse(depth + 1)
            expect = f"{name}>{thr_text}"
            if pos >= len(lines) or lines[pos].strip() != expect or parse_depth(lines[pos]) != depth:
                raise DataFormatError(f"missing high branch for {body!r}")
            pos += 1
            high = parse(depth + 1)
            counts = low.counts + high.counts
            return NumericSplit(a.index, threshold, low, high, counts)
        if "=" in body:
            name, _ = body.split("=", 1)
            a = by_name.get(name)
            if a is None or a.is_numeric:
                raise DataFormatError(f"bad nominal test {body!r}")
            children = []
            for value in a.domain:
                expect = f"{name}={value}"
                if pos >= len(lines) or lines[pos].strip() != expect or parse_depth(lines[pos]) != depth:
                    raise DataFormatError(f"missing branch {expect!r}")
                pos += 1
                children.append(parse(depth + 1))
            counts = np.sum([c.counts for c in children], axis=0)
            return NominalSplit(a.index, tuple(children), counts)
        raise DataFormatError(f"unparseable tree line: {body!r}")

    root = parse(0)
    if pos != len(lines):
        raise DataFormatError("trailing content in tree text")
    return DecisionTree(root, schema, classes)
