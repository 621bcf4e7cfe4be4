"""Command-line surface: dataset generation, cost assignment, training,
and benchmark sweeps over misclassification-cost levels and sample sizes.

Every command is deterministic given its full flag set; a missing --seed
means seed 0.  Exit codes: 0 success, 2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .act import AnytimeConfig
from .costgen import CostAssignmentParams, assign_costs
from .costs import load_cost_model, save_cost_model, with_matrix
from .dataset import (
    Dataset,
    generate_multi_and_or,
    generate_multi_xor,
    generate_multiplexer,
    generate_numeric_xor3d,
    generate_xor,
    load_dataset,
    save_dataset,
)
from .errors import DataFormatError, UnsupportedFeatureError
from .estimate import problem_scale, total_cost
from .estimators import ALGORITHMS, make_classifier
from .evaluation import compare_methods, kfold_cv, paired_ttest, wilcoxon
from .tree import tree_size, tree_to_text

ANYTIME_ALGOS = ("lsid3", "act")


@dataclass
class RunConfig:
    """Resolved invocation of a training or benchmark run."""

    command: str
    data_paths: tuple
    cost_paths: tuple
    algos: tuple
    mc_values: tuple
    r_values: tuple
    k: int
    seeds: int
    seed: int
    out: Path
    force: bool = False
    per_fold: bool = False


def _cost_range(text: str) -> tuple[float, float]:
    try:
        lo, _, hi = text.partition(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="costtree", description="cost-sensitive decision tree toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gendata", help="write a synthetic dataset")
    p.add_argument("generator", choices=("xor", "multiplexer", "xor3d", "multixor", "multiandor"))
    p.add_argument("-n", "--instances", type=int, required=True)
    p.add_argument("--relevant", type=int, default=5, help="xor: parity bits")
    p.add_argument("--irrelevant", type=int, default=5, help="xor/xor3d: noise attributes")
    p.add_argument("--address-bits", type=int, default=3, help="multiplexer: address width")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("gencosts", help="draw a cost model for a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--cr", type=_cost_range, default=(1.0, 100.0), help="cost range lo:hi")
    p.add_argument("--g", type=float, default=0.2, help="fraction of attributes in groups")
    p.add_argument("--d", type=float, default=0.0, help="delayed-test fraction (must be 0)")
    p.add_argument("--phi", type=float, default=0.8, help="group discount factor")
    p.add_argument("--rho", type=float, default=1.0, help="1 = gain-correlated costs, 0 = iid")
    p.add_argument("--seed", type=int, default=0)
    mc = p.add_mutually_exclusive_group()
    mc.add_argument("--mc", type=float, help="uniform off-diagonal misclassification cost")
    mc.add_argument("--mc-matrix", help="JSON file with an explicit matrix")
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("train", help="induce one tree and report its estimated cost")
    p.add_argument("--data", required=True)
    p.add_argument("--costs", required=True)
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--r", type=int, default=None, help="sample size for anytime algorithms")
    p.add_argument("--w", type=float, default=None)
    p.add_argument("--cf", type=float, default=None)
    p.add_argument("--min-split", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True, help="tree file to write")

    p = sub.add_parser("bench", help="cross-validated sweep over algorithms, mc, and r")
    p.add_argument("--data", action="append", required=True, help="dataset file (repeatable)")
    p.add_argument("--costs", action="append", required=True, help="cost file, one per --data")
    p.add_argument("--algos", type=str, required=True, help="comma-separated algorithm names")
    p.add_argument("--mc", type=_float_list, default=(), help="uniform mc values to sweep")
    p.add_argument("--r", type=_int_list, default=(5,), help="sample sizes for anytime algorithms")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seeds", type=int, default=1, help="number of seed repetitions")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--per-fold", action="store_true", help="also write per-fold detail")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p.add_argument("-o", "--out", required=True, help="output directory")
    return parser


# -- commands ---------------------------------------------------------------------


def cmd_gendata(args) -> int:
    n = args.instances
    if n < 1:
        raise ValueError("need at least one instance")
    if args.generator == "xor":
        ds = generate_xor(args.relevant, args.irrelevant, n, args.seed)
    elif args.generator == "multiplexer":
        ds = generate_multiplexer(args.address_bits, n, args.seed)
    elif args.generator == "xor3d":
        ds = generate_numeric_xor3d(args.irrelevant, n, args.seed)
    elif args.generator == "multixor":
        ds = generate_multi_xor(n, args.seed)
    else:
        ds = generate_multi_and_or(n, args.seed)
    save_dataset(ds, args.out)
    return 0


def cmd_gencosts(args) -> int:
    ds = load_dataset(args.data)
    params = CostAssignmentParams(cr=args.cr, g=args.g, d=args.d, phi=args.phi, rho=args.rho)
    matrix = None
    if args.mc is not None:
        matrix = float(args.mc)
    elif args.mc_matrix is not None:
        try:
            matrix = np.asarray(json.loads(Path(args.mc_matrix).read_text()), dtype=np.float64)
        except (json.JSONDecodeError, ValueError) as e:
            raise DataFormatError(f"{args.mc_matrix}: bad matrix file ({e})") from None
    model = assign_costs(ds, params, args.seed, matrix)
    save_cost_model(model, args.out)
    return 0


def _effective_cf(args, model) -> float:
    if args.cf is not None:
        return args.cf
    if args.algo == "act":
        return problem_scale(model).cf
    return 0.25


def cmd_train(args) -> int:
    ds = load_dataset(args.data)
    model = load_cost_model(args.costs, ds)
    r = args.r
    if r is not None and args.algo not in ANYTIME_ALGOS:
        print(f"warning: --r has no effect on {args.algo}; ignored", file=sys.stderr)
        r = None
    est = make_classifier(
        args.algo, r=5 if r is None else r, seed=args.seed,
        w=args.w, cf=args.cf, min_split=args.min_split,
    )
    est.fit(ds, model)
    cf = _effective_cf(args, model)
    estimate = total_cost(est.tree_, len(ds), model, cf)
    Path(args.out).write_text(tree_to_text(est.tree_))
    print(f"tcost\t{estimate.tcost:.6f}")
    print(f"mcost\t{estimate.mcost:.6f}")
    print(f"total\t{estimate.total:.6f}")
    print(f"size\t{tree_size(est.tree_)}")
    return 0


def _bench_methods(algos, r_values):
    methods = []
    for algo in algos:
        if algo in ANYTIME_ALGOS:
            for r in r_values:
                methods.append((f"{algo}@r{r}", algo, r))
        else:
            methods.append((algo, algo, None))
    return methods


def _check_outputs(paths, force: bool) -> None:
    for p in paths:
        if p.exists() and not force:
            raise ValueError(f"{p} exists; pass --force to overwrite")


def cmd_bench(args) -> int:
    config = RunConfig(
        command="bench",
        data_paths=tuple(args.data),
        cost_paths=tuple(args.costs),
        algos=tuple(a for a in args.algos.split(",") if a),
        mc_values=tuple(args.mc),
        r_values=tuple(args.r),
        k=args.k,
        seeds=args.seeds,
        seed=args.seed,
        out=Path(args.out),
        force=args.force,
        per_fold=args.per_fold,
    )
    if len(config.data_paths) != len(config.cost_paths):
        raise ValueError("need exactly one --costs per --data")
    for algo in config.algos:
        if algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algo!r}")
    if config.seeds < 1:
        raise ValueError("--seeds must be positive")
    config.out.mkdir(parents=True, exist_ok=True)
    summary_path = config.out / "summary.tsv"
    signif_path = config.out / "significance.tsv"
    folds_path = config.out / "folds.tsv"
    outputs = [summary_path, signif_path] + ([folds_path] if config.per_fold else [])
    _check_outputs(outputs, config.force)

    datasets = []
    for dpath, cpath in zip(config.data_paths, config.cost_paths):
        ds = load_dataset(dpath)
        datasets.append((Path(dpath).stem, ds, load_cost_model(cpath, ds)))
    mc_values = list(config.mc_values) if config.mc_values else [None]
    methods = _bench_methods(config.algos, config.r_values)
    seeds = [config.seed + i for i in range(config.seeds)]

    summary_rows = []
    fold_rows = []
    signif_rows = []
    for ds_name, ds, base_model in datasets:
        for mc in mc_values:
            model = base_model if mc is None else with_matrix(base_model, mc)
            mc_label = "file" if mc is None else f"{mc:g}"
            # per method: per-seed fold costs, all sharing the seed's partition
            per_method: dict[str, list[list[float]]] = {}
            for method_name, algo, r in methods:
                per_seed = []
                for s in seeds:
                    est = make_classifier(algo, r=5 if r is None else r, seed=s)
                    report = kfold_cv(ds, model, est, config.k, seed=s)
                    norm = list(report.normalized_costs)
                    per_seed.append(norm)
                    summary_rows.append(
                        (ds_name, method_name, mc_label, s,
                         float(np.mean(norm)), report.ci_halfwidth,
                         report.mean_accuracy, report.mean_tree_size)
                    )
                    for f_idx, fr in enumerate(report.folds):
                        fold_rows.append(
                            (ds_name, method_name, mc_label, s, f_idx,
                             fr.avg_cost / report.standard_cost, fr.accuracy, fr.tree_size)
                        )
                per_method[method_name] = per_seed
            for i in range(len(methods)):
                for j in range(i + 1, len(methods)):
                    name_a, name_b = methods[i][0], methods[j][0]
                    flat_a = [c for seed_costs in per_method[name_a] for c in seed_costs]
                    flat_b = [c for seed_costs in per_method[name_b] for c in seed_costs]
                    winner_t, p_t = paired_ttest(flat_a, flat_b)
                    seed_pairs = [
                        (float(np.mean(a)), float(np.mean(b)))
                        for a, b in zip(per_method[name_a], per_method[name_b])
                    ]
                    if len(seed_pairs) >= 2:
                        winner_w, p_w = wilcoxon(seed_pairs)
                    else:
                        winner_w, p_w = None, float("nan")
                    signif_rows.append(
                        (ds_name, mc_label, name_a, name_b,
                         _winner_name(winner_t, name_a, name_b), p_t,
                         _winner_name(winner_w, name_a, name_b), p_w)
                    )

    # aggregate over seeds for the headline table
    agg: dict[tuple, list] = {}
    for ds_name, method, mc_label, s, norm, ci, acc, size in summary_rows:
        agg.setdefault((ds_name, method, mc_label), []).append((norm, acc, size))
    lines = ["dataset\tmethod\tmc\tseeds\tmean_norm_cost\tmean_accuracy\tmean_tree_size"]
    for key in sorted(agg):
        vals = agg[key]
        lines.append(
            "\t".join((key[0], key[1], key[2], str(len(vals)),
                       f"{np.mean([v[0] for v in vals]):.6f}",
                       f"{np.mean([v[1] for v in vals]):.6f}",
                       f"{np.mean([v[2] for v in vals]):.2f}"))
        )
    summary_path.write_text("\n".join(lines) + "\n")

    lines = ["dataset\tmc\tmethod_a\tmethod_b\tttest_winner\tttest_p\twilcoxon_winner\twilcoxon_p"]
    for row in signif_rows:
        lines.append(
            "\t".join((row[0], row[1], row[2], row[3], row[4],
                       f"{row[5]:.6g}", row[6], f"{row[7]:.6g}"))
        )
    signif_path.write_text("\n".join(lines) + "\n")

    if config.per_fold:
        lines = ["dataset\tmethod\tmc\tseed\tfold\tnorm_cost\taccuracy\ttree_size"]
        for row in fold_rows:
            lines.append(
                "\t".join((row[0], row[1], row[2], str(row[3]), str(row[4]),
                           f"{row[5]:.6f}", f"{row[6]:.6f}", str(row[7])))
            )
        folds_path.write_text("\n".join(lines) + "\n")
    return 0


def _winner_name(winner, name_a, name_b) -> str:
    if winner is None:
        return "-"
    return name_a if winner == 0 else name_b


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gendata":
            return cmd_gendata(args)
        if args.command == "gencosts":
            return cmd_gencosts(args)
        if args.command == "train":
            return cmd_train(args)
        return cmd_bench(args)
    except (DataFormatError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (UnsupportedFeatureError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
