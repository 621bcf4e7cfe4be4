import numpy as np
import pytest

from costtree.costgen import CostAssignmentParams, assign_costs
from costtree.dataset import generate_xor
from costtree.errors import UnsupportedFeatureError


def test_params_validation():
    CostAssignmentParams()
    with pytest.raises(ValueError):
        CostAssignmentParams(cr=(10.0, 5.0))
    with pytest.raises(ValueError):
        CostAssignmentParams(cr=(0.0, 5.0))
    with pytest.raises(ValueError):
        CostAssignmentParams(g=1.5)
    with pytest.raises(ValueError):
        CostAssignmentParams(phi=1.0)
    with pytest.raises(ValueError):
        CostAssignmentParams(rho=0.5)


def test_delayed_tests_unsupported():
    ds = generate_xor(2, 2, 30, seed=0)
    with pytest.raises(UnsupportedFeatureError):
        assign_costs(ds, CostAssignmentParams(d=0.3), seed=0)


def test_costs_within_range_and_deterministic():
    ds = generate_xor(3, 3, 120, seed=1)
    params = CostAssignmentParams(cr=(2.0, 20.0), g=0.5, phi=0.5, rho=1.0)
    a = assign_costs(ds, params, seed=7)
    b = assign_costs(ds, params, seed=7)
    np.testing.assert_array_equal(a.test_costs, b.test_costs)
    np.testing.assert_array_equal(a.group_of, b.group_of)
    assert np.all(a.test_costs >= 2.0) and np.all(a.test_costs <= 20.0)
    c = assign_costs(ds, params, seed=8)
    assert not np.array_equal(a.test_costs, c.test_costs)


def test_rho_zero_is_gain_blind():
    """With iid costs, informative and uninformative attributes draw from
    the same distribution; with rho=1 informative attributes price higher."""
    ds = generate_xor(1, 7, 4000, seed=2)
    lo, hi = 1.0, 100.0
    iid = CostAssignmentParams(cr=(lo, hi), g=0.0, rho=0.0)
    corr = CostAssignmentParams(cr=(lo, hi), g=0.0, rho=1.0)
    iid_costs = []
    corr_costs = []
    for seed in range(40):
        iid_costs.append(assign_costs(ds, iid, seed=seed).test_costs)
        corr_costs.append(assign_costs(ds, corr, seed=seed).test_costs)
    iid_costs = np.array(iid_costs)
    corr_costs = np.array(corr_costs)
    # the relevant bit x1 has (almost) all the gain
    assert corr_costs[:, 0].mean() > corr_costs[:, 1:].mean() + 20
    assert abs(iid_costs[:, 0].mean() - iid_costs[:, 1:].mean()) < 15


def test_group_discount_is_phi_of_cheapest_member():
    ds = generate_xor(3, 5, 60, seed=3)
    params = CostAssignmentParams(cr=(5.0, 50.0), g=1.0, phi=0.8, rho=0.0)
    model = assign_costs(ds, params, seed=11)
    for g in range(len(model.group_names)):
        members = np.flatnonzero(model.group_of == g)
        assert len(members) >= 1
        expect = 0.8 * model.test_costs[members].min()
        assert model.group_discounts[g] == pytest.approx(expect, rel=1e-12)


def test_group_count_scales_with_g():
    ds = generate_xor(4, 6, 80, seed=4)
    none = assign_costs(ds, CostAssignmentParams(g=0.0, rho=0.0), seed=1)
    assert len(none.group_names) == 0
    some = assign_costs(ds, CostAssignmentParams(g=1.0, phi=0.5, rho=0.0), seed=1)
    # k = round(g * |A|) candidate groups; empty ones are dropped
    assert 1 <= len(some.group_names) <= 10
    assert all(name.startswith("g") for name in some.group_names)


def test_matrix_pass_through():
    ds = generate_xor(2, 2, 30, seed=5)
    params = CostAssignmentParams(rho=0.0)
    scalar = assign_costs(ds, params, seed=0, matrix=250.0)
    assert scalar.uniform_mc() == 250.0
    explicit = assign_costs(ds, params, seed=0,
                            matrix=np.array([[0.0, 5.0], [9.0, 0.0]]))
    np.testing.assert_array_equal(explicit.matrix, [[0, 5], [9, 0]])
    default = assign_costs(ds, params, seed=0)
    np.testing.assert_array_equal(default.matrix, np.zeros((2, 2)))


def test_costs_respect_bounds_under_correlation():
    # truncated draws must clamp into [lo, hi] even for extreme gains
    ds = generate_xor(1, 1, 500, seed=6)
    params = CostAssignmentParams(cr=(10.0, 11.0), g=0.0, rho=1.0)
    for seed in range(30):
        model = assign_costs(ds, params, seed=seed)
        assert np.all(model.test_costs >= 10.0)
        assert np.all(model.test_costs <= 11.0)
