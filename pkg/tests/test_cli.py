import json

import numpy as np
import pytest

from costtree.cli import main
from costtree.costs import load_cost_model
from costtree.dataset import load_dataset
from costtree.tree import tree_from_text


def run(argv):
    return main([str(a) for a in argv])


def gen_toy(tmp_path, n=60, seed=0):
    data = tmp_path / "toy.csv"
    assert run(["gendata", "xor", "-n", n, "--relevant", "2", "--irrelevant", "1",
                "--seed", seed, "-o", data]) == 0
    costs = tmp_path / "toy-costs.json"
    assert run(["gencosts", "--data", data, "--cr", "1:20", "--g", "0.5",
                "--rho", "1", "--mc", "100", "--seed", "1", "-o", costs]) == 0
    return data, costs


def test_gendata_writes_loadable_csv(tmp_path):
    data, _ = gen_toy(tmp_path)
    ds = load_dataset(data)
    assert len(ds) == 60
    assert ds.n_attributes == 3


def test_gendata_all_generators(tmp_path):
    for name in ("xor", "multiplexer", "xor3d", "multixor", "multiandor"):
        out = tmp_path / f"{name}.csv"
        assert run(["gendata", name, "-n", "30", "--seed", "2", "-o", out]) == 0
        assert len(load_dataset(out)) == 30


def test_gendata_unknown_generator_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run(["gendata", "spiral", "-n", "10", "-o", tmp_path / "x.csv"])
    assert exc.value.code == 2


def test_gencosts_matrix_file(tmp_path):
    data, _ = gen_toy(tmp_path)
    mfile = tmp_path / "matrix.json"
    mfile.write_text("[[0, 7], [13, 0]]")
    out = tmp_path / "c.json"
    assert run(["gencosts", "--data", data, "--mc-matrix", mfile, "-o", out]) == 0
    model = load_cost_model(out, load_dataset(data))
    np.testing.assert_array_equal(model.matrix, [[0, 7], [13, 0]])


def test_gencosts_bad_matrix_is_data_error(tmp_path):
    data, _ = gen_toy(tmp_path)
    mfile = tmp_path / "matrix.json"
    mfile.write_text("not json")
    assert run(["gencosts", "--data", data, "--mc-matrix", mfile,
                "-o", tmp_path / "c.json"]) == 3


def test_gencosts_delayed_tests_rejected(tmp_path):
    data, _ = gen_toy(tmp_path)
    assert run(["gencosts", "--data", data, "--d", "0.5",
                "-o", tmp_path / "c.json"]) == 2


def test_gencosts_missing_data_is_data_error(tmp_path):
    assert run(["gencosts", "--data", tmp_path / "absent.csv",
                "-o", tmp_path / "c.json"]) == 3


def test_train_writes_tree_and_metrics(tmp_path, capsys):
    data, costs = gen_toy(tmp_path)
    out = tmp_path / "tree.txt"
    assert run(["train", "--data", data, "--costs", costs, "--algo", "act",
                "--r", "2", "--seed", "0", "-o", out]) == 0
    captured = capsys.readouterr()
    lines = dict(line.split("\t") for line in captured.out.strip().splitlines())
    assert set(lines) == {"tcost", "mcost", "total", "size"}
    assert float(lines["total"]) == pytest.approx(
        float(lines["tcost"]) + float(lines["mcost"]), abs=1e-6
    )
    ds = load_dataset(data)
    tree = tree_from_text(out.read_text(), ds.schema, ds.classes)
    assert int(lines["size"]) >= 1


def test_train_warns_and_ignores_r_for_greedy(tmp_path, capsys):
    data, costs = gen_toy(tmp_path)
    assert run(["train", "--data", data, "--costs", costs, "--algo", "eg2",
                "--r", "4", "-o", tmp_path / "t.txt"]) == 0
    assert "ignored" in capsys.readouterr().err


def test_train_malformed_data_is_data_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a:{0,1},class:{n,y}\n5,n\n")
    costs = tmp_path / "c.json"
    costs.write_text(json.dumps({"tests": [{"name": "a", "cost": 1.0}],
                                 "matrix": [[0, 1], [1, 0]]}))
    assert run(["train", "--data", bad, "--costs", costs, "--algo", "id3",
                "-o", tmp_path / "t.txt"]) == 3


def test_train_deterministic_output(tmp_path):
    data, costs = gen_toy(tmp_path)
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(["train", "--data", data, "--costs", costs, "--algo", "act",
         "--r", "2", "--seed", "3", "-o", a])
    run(["train", "--data", data, "--costs", costs, "--algo", "act",
         "--r", "2", "--seed", "3", "-o", b])
    assert a.read_bytes() == b.read_bytes()


def test_bench_writes_tables(tmp_path):
    data, costs = gen_toy(tmp_path, n=40)
    out = tmp_path / "bench"
    assert run(["bench", "--data", data, "--costs", costs, "--algos", "eg2,dtmc",
                "--mc", "50,500", "--k", "4", "--seeds", "2", "--seed", "0",
                "--per-fold", "-o", out]) == 0
    summary = (out / "summary.tsv").read_text().splitlines()
    assert summary[0].startswith("dataset\tmethod\tmc")
    # 2 algorithms x 2 mc levels
    assert len(summary) == 1 + 4
    signif = (out / "significance.tsv").read_text().splitlines()
    assert len(signif) == 1 + 2  # one method pair per mc level
    folds = (out / "folds.tsv").read_text().splitlines()
    assert len(folds) == 1 + 2 * 2 * 2 * 4  # algo x mc x seed x fold


def test_bench_refuses_overwrite_without_force(tmp_path):
    data, costs = gen_toy(tmp_path, n=40)
    out = tmp_path / "bench"
    args = ["bench", "--data", data, "--costs", costs, "--algos", "dtmc",
            "--k", "4", "-o", out]
    assert run(args) == 0
    assert run(args) == 2
    assert run(args + ["--force"]) == 0


def test_bench_mismatched_costs_is_usage_error(tmp_path):
    data, costs = gen_toy(tmp_path, n=40)
    assert run(["bench", "--data", data, "--data", data, "--costs", costs,
                "--algos", "dtmc", "-o", tmp_path / "b"]) == 2


def test_bench_unknown_algorithm_is_usage_error(tmp_path):
    data, costs = gen_toy(tmp_path, n=40)
    assert run(["bench", "--data", data, "--costs", costs,
                "--algos", "id5", "-o", tmp_path / "b"]) == 2


def test_anytime_r_sweep_labels_methods(tmp_path):
    data, costs = gen_toy(tmp_path, n=40)
    out = tmp_path / "bench"
    assert run(["bench", "--data", data, "--costs", costs, "--algos", "act",
                "--r", "1,2", "--k", "4", "-o", out]) == 0
    summary = (out / "summary.tsv").read_text()
    assert "act@r1" in summary and "act@r2" in summary
