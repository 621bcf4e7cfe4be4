import numpy as np
import pytest

from costtree.costs import CostModel
from costtree.dataset import Dataset, Example, generate_xor, make_schema
from costtree.errors import DataFormatError
from costtree.tree import (
    DecisionTree,
    Leaf,
    NominalSplit,
    NumericSplit,
    average_tcost,
    classify,
    default_class,
    iter_leaves,
    tree_from_text,
    tree_size,
    tree_to_text,
)


def toy_tree():
    """color splits; red goes to a numeric test on size."""
    schema = make_schema([("color", ("red", "green")), ("size", None)])
    inner = NumericSplit(
        1, 2.5,
        Leaf(0, np.array([4, 1])),
        Leaf(1, np.array([0, 5])),
        np.array([4, 6]),
    )
    root = NominalSplit(0, (inner, Leaf(0, np.array([7, 0]))), np.array([11, 6]))
    return DecisionTree(root, schema, ("no", "yes"))


def toy_model(schema, mc=10.0):
    return CostModel.build(schema, ("no", "yes"), {"color": 2.0, "size": 3.0}, mc)


def test_tree_size_counts_all_nodes():
    tree = toy_tree()
    assert tree_size(tree) == 5
    assert tree_size(tree.root) == 5
    assert tree_size(Leaf(0, np.zeros(2))) == 1


def test_iter_leaves_in_order():
    labels = [leaf.label for leaf in iter_leaves(toy_tree().root)]
    assert labels == [0, 1, 0]


def test_default_class_majority_and_cost_sensitive():
    counts = np.array([3, 5])
    assert default_class(counts) == 1
    schema = make_schema([("color", ("red", "green")), ("size", None)])
    skew = CostModel.build(
        schema, ("no", "yes"), 1.0, np.array([[0.0, 1.0], [100.0, 0.0]])
    )
    # predicting "no" risks 5 x 100, predicting "yes" risks 3 x 1
    assert default_class(counts, skew) == 1
    assert default_class(np.array([5, 3]), skew) == 1
    # ties break to the lowest class index
    assert default_class(np.array([2, 2])) == 0


def test_classify_routes_and_charges():
    tree = toy_tree()
    model = toy_model(tree.schema)
    label, pc = classify(tree, Example(("red", 1.0), ""), model)
    assert label == "no"
    assert pc.tests == frozenset({0, 1})
    assert pc.total == 5.0
    label, pc = classify(tree, Example(("green", 9.9), ""), model)
    assert label == "no"
    assert pc.tests == frozenset({0})
    assert pc.total == 2.0


def test_classify_boundary_goes_low():
    tree = toy_tree()
    label, _ = classify(tree, Example(("red", 2.5), ""))
    assert label == "no"
    label, _ = classify(tree, Example(("red", 2.500001), ""))
    assert label == "yes"


def test_classify_without_model_charges_nothing():
    tree = toy_tree()
    _, pc = classify(tree, Example(("red", 0.0), ""))
    assert pc.total == 0.0 and pc.tests == frozenset({0, 1})


def test_classify_charges_repeated_attribute_once():
    schema = make_schema([("size", None)])
    root = NumericSplit(
        0, 5.0,
        NumericSplit(0, 2.0, Leaf(0, np.array([2, 0])), Leaf(1, np.array([0, 2])),
                     np.array([2, 2])),
        Leaf(1, np.array([0, 3])),
        np.array([2, 5]),
    )
    tree = DecisionTree(root, schema, ("no", "yes"))
    model = CostModel.build(schema, ("no", "yes"), 4.0, 1.0)
    _, pc = classify(tree, Example((1.0,), ""), model)
    assert pc.total == 4.0


def test_average_tcost():
    tree = toy_tree()
    model = toy_model(tree.schema)
    examples = [
        Example(("red", 1.0), "no"),   # color + size = 5
        Example(("green", 1.0), "no"), # color only = 2
    ]
    assert average_tcost(tree, examples, model) == pytest.approx(3.5)


def test_text_round_trip():
    tree = toy_tree()
    text = tree_to_text(tree)
    back = tree_from_text(text, tree.schema, tree.classes)
    assert tree_to_text(back) == text
    assert tree_size(back) == tree_size(tree)
    labels = [leaf.label for leaf in iter_leaves(back.root)]
    assert labels == [0, 1, 0]
    counts = [leaf.counts.tolist() for leaf in iter_leaves(back.root)]
    assert counts == [[4, 1], [0, 5], [7, 0]]


def test_text_format_shape():
    text = tree_to_text(toy_tree())
    lines = text.splitlines()
    assert lines[0] == "color=red"
    assert lines[1] == "  size<=2.5"
    assert "leaf no 4 1" in text
    assert "leaf yes 0 5" in text


def test_parser_rejects_incomplete_branches():
    schema = make_schema([("color", ("red", "green"))])
    text = "color=red\n  leaf no 1 0\n"
    with pytest.raises(DataFormatError):
        tree_from_text(text, schema, ("no", "yes"))


def test_parser_rejects_bad_indent():
    schema = make_schema([("color", ("red", "green"))])
    text = "color=red\n   leaf no 1 0\ncolor=green\n   leaf yes 0 1\n"
    with pytest.raises(DataFormatError):
        tree_from_text(text, schema, ("no", "yes"))


def test_numeric_threshold_repr_round_trip():
    schema = make_schema([("size", None)])
    thr = 0.1 + 0.2  # not exactly representable as a short decimal
    root = NumericSplit(0, thr, Leaf(0, np.array([1, 0])), Leaf(1, np.array([0, 1])),
                        np.array([1, 1]))
    tree = DecisionTree(root, schema, ("no", "yes"))
    back = tree_from_text(tree_to_text(tree), schema, ("no", "yes"))
    assert back.root.threshold == thr
