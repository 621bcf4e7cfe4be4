import numpy as np
import pytest

from costtree.dataset import (
    Attribute,
    Dataset,
    Example,
    generate_multi_and_or,
    generate_multi_xor,
    generate_multiplexer,
    generate_numeric_xor3d,
    generate_xor,
    load_dataset,
    make_schema,
    save_dataset,
)
from costtree.errors import DataFormatError


def small_schema():
    return make_schema([("color", ("red", "green", "blue")), ("size", None)])


def test_attribute_basics():
    color, size = small_schema()
    assert not color.is_numeric and color.arity == 3
    assert size.is_numeric
    assert color.code_of("green") == 1
    with pytest.raises(DataFormatError):
        color.code_of("magenta")


def test_make_schema_rejects_bad_names():
    with pytest.raises(DataFormatError):
        make_schema([("has space", None)])
    with pytest.raises(DataFormatError):
        make_schema([("a", None), ("a", None)])


def test_from_examples_round_trip():
    schema = small_schema()
    examples = [
        Example(("red", 1.5), "yes"),
        Example(("blue", -2.0), "no"),
        Example(("red", 0.0), "yes"),
    ]
    ds = Dataset.from_examples(schema, ("no", "yes"), examples)
    assert len(ds) == 3
    assert ds.n_attributes == 2
    assert ds.examples == examples
    assert ds.example(1).label == "no"
    np.testing.assert_array_equal(ds.y, [1, 0, 1])
    np.testing.assert_array_equal(ds.class_counts(), [1, 2])


def test_select_views_subset():
    ds = generate_xor(2, 1, 40, seed=1)
    sub = ds.select(np.array([3, 5, 7]))
    assert len(sub) == 3
    assert sub.examples == [ds.example(3), ds.example(5), ds.example(7)]


def test_csv_round_trip(tmp_path):
    schema = small_schema()
    examples = [
        Example(("red", 1.5), "yes"),
        Example(("blue", -2.25), "no"),
        Example(("green", 3.0), "yes"),
    ]
    ds = Dataset.from_examples(schema, ("no", "yes"), examples)
    path = tmp_path / "toy.csv"
    save_dataset(ds, path)
    back = load_dataset(path)
    assert back.classes == ds.classes
    assert [a.name for a in back.schema] == ["color", "size"]
    assert back.examples == examples
    # byte-identical on re-save
    save_dataset(back, tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()


def test_load_rejects_missing_values(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a:{0,1},class:{n,y}\n0,y\n?,n\n")
    with pytest.raises(DataFormatError):
        load_dataset(path)


def test_load_rejects_unknown_nominal_value(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a:{0,1},class:{n,y}\n2,y\n")
    with pytest.raises(DataFormatError):
        load_dataset(path)


def test_load_rejects_nonnumeric_in_numeric_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a:num,class:{n,y}\nhello,y\n")
    with pytest.raises(DataFormatError):
        load_dataset(path)


def test_load_rejects_ragged_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a:{0,1},b:{0,1},class:{n,y}\n0,y\n")
    with pytest.raises(DataFormatError):
        load_dataset(path)


def test_xor_labels():
    ds = generate_xor(3, 2, 300, seed=9)
    assert ds.n_attributes == 5
    assert [a.name for a in ds.schema] == ["x1", "x2", "x3", "irr1", "irr2"]
    bits = np.stack([ds.column(j) for j in range(3)], axis=1)
    expect = bits.sum(axis=1) % 2
    np.testing.assert_array_equal(ds.y, expect)


def test_multiplexer_labels():
    ds = generate_multiplexer(2, 200, seed=4)
    # 2 address bits select one of 4 data bits
    assert ds.n_attributes == 6
    addr = ds.column(0) * 2 + ds.column(1)
    data = np.stack([ds.column(2 + j) for j in range(4)], axis=1)
    expect = data[np.arange(len(ds)), addr]
    np.testing.assert_array_equal(ds.y, expect)


def test_numeric_xor3d_labels():
    ds = generate_numeric_xor3d(2, 150, seed=2)
    assert ds.n_attributes == 5
    assert all(a.is_numeric for a in ds.schema)
    prod = ds.column(0) * ds.column(1) * ds.column(2)
    labels = np.array([ds.classes[c] for c in ds.y])
    np.testing.assert_array_equal(labels == "1", prod > 0)


def test_multi_xor_labels():
    ds = generate_multi_xor(400, seed=5)
    assert [a.name for a in ds.schema] == [
        "s1", "s2", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9",
    ]
    cols = {a.name: ds.column(j) for j, a in enumerate(ds.schema)}
    group = cols["s1"] * 2 + cols["s2"]
    sub = [
        cols["x1"] ^ cols["x2"],
        cols["x3"] ^ cols["x4"],
        cols["x5"] ^ cols["x6"],
        cols["x7"] ^ cols["x8"] ^ cols["x9"],
    ]
    expect = np.choose(group, sub)
    np.testing.assert_array_equal(ds.y, expect)


def test_multi_and_or_labels():
    ds = generate_multi_and_or(400, seed=6)
    cols = {a.name: ds.column(j) for j, a in enumerate(ds.schema)}
    group = cols["s1"] * 2 + cols["s2"]
    sub = [
        cols["x1"] & cols["x2"],
        cols["x3"] | cols["x4"],
        cols["x5"] & cols["x6"],
        cols["x7"] | cols["x8"] | cols["x9"],
    ]
    expect = np.choose(group, sub)
    np.testing.assert_array_equal(ds.y, expect)


def test_generators_are_deterministic():
    a = generate_xor(4, 3, 100, seed=11)
    b = generate_xor(4, 3, 100, seed=11)
    assert a.examples == b.examples
    c = generate_xor(4, 3, 100, seed=12)
    assert a.examples != c.examples
