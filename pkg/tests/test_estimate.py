import math

import numpy as np
import pytest

from costtree.costs import ChargeContext, CostModel, EMPTY_CONTEXT
from costtree.dataset import make_schema
from costtree.estimate import (
    expected_error,
    leaf_mcost,
    problem_scale,
    total_cost,
    total_test_cost,
    tree_mcost,
)
from costtree.tree import DecisionTree, Leaf, NominalSplit


def model_for(n_attrs=3, cost=10.0, matrix=100.0, groups=None):
    schema = make_schema([(f"a{i}", ("0", "1")) for i in range(n_attrs)])
    return CostModel.build(schema, ("pos", "neg"), cost, matrix, groups=groups)


def test_expected_error_closed_forms():
    # all wrong: the pessimistic count saturates at m
    assert expected_error(30, 30, 0.25) == 30.0
    # none wrong: m(1 - cf^(1/m))
    m, cf = 50, 0.25
    assert expected_error(m, 0, cf) == pytest.approx(m * (1 - cf ** (1 / m)), abs=1e-12)


def test_expected_error_monotonicity():
    # more observed errors -> larger estimate
    values = [expected_error(100, s, 0.25) for s in range(0, 101, 10)]
    assert all(b > a for a, b in zip(values, values[1:]))
    # smaller cf (more pessimism) -> larger estimate
    assert expected_error(100, 5, 0.1) > expected_error(100, 5, 0.25)
    assert expected_error(100, 5, 0.25) > expected_error(100, 5, 0.9)


def test_expected_error_bounds_and_validation():
    ee = expected_error(100, 5, 0.25)
    assert 5 < ee < 100
    with pytest.raises(ValueError):
        expected_error(0, 0, 0.25)
    with pytest.raises(ValueError):
        expected_error(10, 11, 0.25)
    with pytest.raises(ValueError):
        expected_error(10, 2, 0.0)
    with pytest.raises(ValueError):
        expected_error(10, 2, 1.0)


def test_leaf_mcost_uniform_reduces_to_ee_times_cost():
    model = model_for(matrix=100.0)
    counts = np.array([95, 5])
    got = leaf_mcost(counts, 0, model, 0.25)
    assert got == pytest.approx(expected_error(100, 5, 0.25) * 100.0, rel=1e-12)


def test_leaf_mcost_empty_leaf_is_free():
    model = model_for()
    assert leaf_mcost(np.array([0, 0]), 0, model, 0.25) == 0.0


def test_leaf_mcost_weights_penalties_by_class():
    schema = make_schema([("a", ("0", "1"))])
    model = CostModel.build(
        schema, ("x", "y", "z"), 1.0,
        np.array([[0.0, 1.0, 2.0], [10.0, 0.0, 4.0], [100.0, 8.0, 0.0]]),
    )
    counts = np.array([6, 3, 1])
    label = 0
    s = 4
    ee = expected_error(10, 4, 0.25)
    # errors spread over y and z with Laplace weights, priced at matrix[i, 0]
    denom = s + 3 - 1
    expect = ee * ((3 + 1) / denom * 10.0 + (1 + 1) / denom * 100.0)
    assert leaf_mcost(counts, label, model, 0.25) == pytest.approx(expect, rel=1e-12)


def test_tree_mcost_averages_leaves():
    model = model_for()
    root = NominalSplit(
        0,
        (Leaf(0, np.array([95, 5])), Leaf(1, np.array([5, 95]))),
        np.array([100, 100]),
    )
    per_leaf = expected_error(100, 5, 0.25) * 100.0
    assert tree_mcost(root, 200, model, 0.25) == pytest.approx(2 * per_leaf / 200)


def test_total_cost_charges_paths_once():
    model = model_for(n_attrs=2, cost=10.0)
    inner = NominalSplit(
        1, (Leaf(0, np.array([40, 0])), Leaf(1, np.array([0, 40]))), np.array([40, 40])
    )
    root = NominalSplit(0, (inner, Leaf(1, np.array([0, 20]))), np.array([40, 60]))
    est = total_cost(root, 100, model, 0.25)
    # everyone pays a0; the 80 under the inner node pay a1 too
    assert est.tcost == pytest.approx((100 * 10 + 80 * 10) / 100)
    assert est.total == pytest.approx(est.tcost + est.mcost)


def test_total_cost_respects_outer_context():
    model = model_for(n_attrs=2, cost=10.0)
    root = NominalSplit(
        0, (Leaf(0, np.array([10, 0])), Leaf(1, np.array([0, 10]))), np.array([10, 10])
    )
    free = total_cost(root, 20, model, 0.25,
                      ctx=ChargeContext(frozenset({0}), frozenset()))
    paid = total_cost(root, 20, model, 0.25)
    assert free.tcost == 0.0
    assert paid.tcost == 10.0
    assert free.mcost == paid.mcost


def test_total_cost_group_discount_inside_subtree():
    model = model_for(
        n_attrs=2, cost=10.0, groups={"g": (("a0", "a1"), 4.0)}
    )
    inner = NominalSplit(
        1, (Leaf(0, np.array([20, 0])), Leaf(1, np.array([0, 20]))), np.array([20, 20])
    )
    root = NominalSplit(0, (inner, Leaf(1, np.array([0, 20]))), np.array([20, 40]))
    est = total_cost(root, 60, model, 0.25)
    # a1 under a0 costs 10 - 4
    assert est.tcost == pytest.approx((60 * 10 + 40 * 6) / 60)


def test_total_cost_accepts_collection_or_count():
    model = model_for(n_attrs=1)
    root = Leaf(0, np.array([5, 5]))
    a = total_cost(root, 10, model, 0.25)
    b = total_cost(root, list(range(10)), model, 0.25)
    assert a == b
    with pytest.raises(ValueError):
        total_cost(root, 0, model, 0.25)


def test_total_test_cost_applies_discounts_once():
    model = model_for(n_attrs=3, cost=10.0, groups={"g": (("a0", "a2"), 3.0)})
    assert total_test_cost(model) == pytest.approx(10 + 10 + 7)


def test_problem_scale_endpoints():
    # x = mean penalty over total test cost; engineered here to hit 0 and 1
    zero = model_for(n_attrs=2, cost=50.0, matrix=0.0)
    s0 = problem_scale(zero)
    assert s0.x == 0.0
    assert s0.w == pytest.approx(1.5, abs=1e-12)
    assert s0.cf == pytest.approx(0.2, abs=1e-12)
    unit = model_for(n_attrs=2, cost=50.0, matrix=100.0)
    s1 = problem_scale(unit)
    assert s1.x == pytest.approx(1.0, abs=1e-12)
    assert s1.cf == pytest.approx(0.25, abs=1e-12)


def test_problem_scale_rejects_free_tests():
    free = model_for(cost=0.0)
    with pytest.raises(ValueError):
        problem_scale(free)
