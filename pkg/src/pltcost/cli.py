"""Command-line entry point: ``pltcost {build,cost,assign,predict,verify,bench}``.

Reports are tab-separated with a header line. Exit status: 0 success,
1 I/O, parse or verification failure, 2 input structure unsuitable for the
requested method.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import builders, matryoshka, oracle
from .builders import StructureError, WeightProfile
from .cost import (
    assign_to_nodes,
    binarize,
    compute_node_weights,
    dataset_cost,
    example_cost,
    sensitivity,
    total_cost,
)
from .labels import DatasetFormatError, LabelMatrix, read_dataset
from .matryoshka import NotNestedError
from .oracle import OracleRangeError
from .predictor import (
    perturb_and_normalize,
    predict,
    prediction_cost_bounds,
    scenario_node_probabilities,
)
from .scenario import ScenarioError, read_scenario
from .tree import InvalidTreeError, LabelTree, TreeFormatError, check_tree, read_tree

METHODS = (
    "ternary-complete",
    "ternary-huffman",
    "ternary-shannon",
    "binary-merge",
    "matryoshka",
    "oracle",
)

# flip checks per verify run; larger inputs are sampled from the first rows
FLIP_BUDGET = 2_000_000


class UsageError(Exception):
    pass


def build_tree(Y: LabelMatrix, method: str, allow_large: bool = False) -> LabelTree:
    if method == "ternary-complete":
        return builders.build_complete_ternary(Y.m)
    if method == "ternary-huffman":
        return builders.build_ternary_huffman(WeightProfile.from_matrix(Y))
    if method == "ternary-shannon":
        return builders.build_ternary_shannon(WeightProfile.from_matrix(Y))
    if method == "binary-merge":
        return builders.build_binary_merge(Y)
    if method == "matryoshka":
        return matryoshka.solve_matrix(Y)[0]
    if method == "oracle":
        return oracle.optimal_tree(Y, allow_large=allow_large)[0]
    raise UsageError(f"unknown method {method!r}")


def _load_pair(args) -> tuple[LabelMatrix, LabelTree]:
    Y = read_dataset(args.input)
    T = check_tree(read_tree(args.tree), Y.m)
    return Y, T


def cmd_build(args, out) -> int:
    Y = read_dataset(args.input)
    T = build_tree(Y, args.method, allow_large=args.allow_large)
    text = T.to_tsv()
    if args.output in (None, "-"):
        out.write(text)
    else:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    return 0


def cmd_cost(args, out) -> int:
    Y, T = _load_pair(args)
    report = dataset_cost(T, Y)
    stats = compute_node_weights(T, Y)
    out.write("quantity\tvalue\n")
    out.write(f"n\t{Y.n}\nm\t{Y.m}\nnodes\t{T.size}\n")
    out.write(f"depth\t{T.depth}\nmax_degree\t{T.max_degree}\n")
    out.write(f"total\t{report.total}\n")
    out.write(f"node_sum\t{sum(report.per_node)}\n")
    if args.per_node:
        out.write("\nnode\tparent\tlabel\tdegree\tz_weight\tnode_cost\n")
        for v in range(T.size):
            out.write(
                f"{v}\t{T.parent[v]}\t{T.label[v]}\t{T.degree(v)}\t"
                f"{stats.z_weight[v]}\t{stats.node_cost[v]}\n"
            )
    if args.per_row:
        out.write("\nrow\tcost\tupper_bound\n")
        for i, (c, b) in enumerate(zip(report.per_row, report.upper_bound)):
            out.write(f"{i}\t{c}\t{b}\n")
    return 0


def cmd_assign(args, out) -> int:
    Y, T = _load_pair(args)
    if not 0 <= args.row < Y.n:
        raise UsageError(f"row {args.row} out of range [0, {Y.n})")
    a = assign_to_nodes(T, Y.rows[args.row])
    out.write("set\tnodes\n")
    out.write("P\t" + " ".join(map(str, sorted(a.positives))) + "\n")
    out.write("N\t" + " ".join(map(str, sorted(a.negatives))) + "\n")
    out.write(f"cost\t{a.size}\n")
    return 0


def cmd_predict(args, out) -> int:
    T = read_tree(args.tree)
    S = read_scenario(args.scenario)
    check_tree(T, S.m)
    probs = scenario_node_probabilities(T, S)
    E = perturb_and_normalize(probs, args.epsilon, args.seed, args.tau)
    result = predict(T, E)
    rep = prediction_cost_bounds(T, S, E)
    out.write("quantity\tvalue\n")
    out.write("predicted\t" + " ".join(map(str, sorted(result.predicted))) + "\n")
    out.write(f"calls\t{result.calls}\n")
    out.write(f"calls_bound\t{result.call_bound}\n")
    out.write(f"p_true\t{rep.p_true:.12g}\n")
    out.write(f"p_hat\t{rep.p_hat:.12g}\n")
    out.write(f"p_hat_bound\t{rep.p_hat_bound:.12g}\n")
    out.write(f"expected_training_cost\t{rep.training_cost:.12g}\n")
    out.write(f"expected_calls_bound\t{rep.expected_calls_bound:.12g}\n")
    worst = max(r - b for r, b in zip(rep.residuals, rep.residual_bounds))
    out.write(f"max_residual_slack\t{worst:.12g}\n")
    out.write(f"bounds_ok\t{int(rep.ok)}\n")
    return 0


def verify_checks(Y: LabelMatrix, T: LabelTree) -> list[tuple[str, bool, str]]:
    """(name, passed, detail) for every tree/cost invariant on this input."""
    checks = []
    report = dataset_cost(T, Y)
    node_total = Y.n + sum(report.per_node)
    checks.append(("decomposition", sum(report.per_row) == node_total,
                   f"rows={sum(report.per_row)} nodes={node_total}"))

    mismatched = 0
    for r in Y.rows:
        if example_cost(T, r) != assign_to_nodes(T, r).size:
            mismatched += 1
    checks.append(("assignment_size", mismatched == 0, f"mismatched_rows={mismatched}"))

    over = sum(1 for c, b in zip(report.per_row, report.upper_bound) if c > b)
    checks.append(("row_upper_bound", over == 0, f"violations={over}"))

    z = compute_node_weights(T, Y).z_weight
    bad = 0
    for v in T.internal_nodes:
        ch = [z[c] for c in T.children[v]]
        if not (max(ch) <= z[v] <= min(Y.n, sum(ch))):
            bad += 1
    checks.append(("weight_sandwich", bad == 0, f"violations={bad}"))

    d = [sensitivity(T, i) for i in range(Y.m)]
    flips = 0
    bad = 0
    for r, base in zip(Y.rows, report.per_row):
        if flips + Y.m > FLIP_BUDGET:
            break
        rs = set(r)
        for i in range(Y.m):
            flipped = rs ^ {i}
            if abs(example_cost(T, flipped) - base) > d[i]:
                bad += 1
        flips += Y.m
    checks.append(("bounded_difference", bad == 0, f"flips_checked={flips} violations={bad}"))

    B = binarize(T, Y)
    bc = total_cost(B, Y)
    checks.append(("binarize_factor2", bc <= 2 * report.total, f"binary={bc} original={report.total}"))
    return checks


def cmd_verify(args, out) -> int:
    Y, T = _load_pair(args)
    checks = verify_checks(Y, T)
    out.write("check\tstatus\tdetail\n")
    for name, ok, detail in checks:
        out.write(f"{name}\t{'pass' if ok else 'FAIL'}\t{detail}\n")
    return 0 if all(ok for _, ok, _ in checks) else 1


def cmd_bench(args, out) -> int:
    Y = read_dataset(args.input)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()] if args.methods else [
        m for m in METHODS if m != "oracle"
    ]
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}")
    include_oracle = Y.m <= oracle.HARD_MAX_M and Y.m >= 1
    if include_oracle and "oracle" not in methods:
        methods.append("oracle")
    rows = []
    best = None
    for m in methods:
        try:
            T = build_tree(Y, m, allow_large=True)
        except (StructureError, NotNestedError, OracleRangeError) as exc:
            rows.append((m, None, str(exc)))
            continue
        c = total_cost(T, Y)
        rows.append((m, c, ""))
        if m == "oracle":
            best = c
    out.write("method\tcost\tratio_to_oracle\tnote\n")
    for m, c, note in rows:
        if c is None:
            out.write(f"{m}\tNA\tNA\t{note}\n")
        else:
            ratio = f"{c / best:.6f}" if best else "NA"
            out.write(f"{m}\t{c}\t{ratio}\t{note}\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pltcost", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build", help="build a label tree")
    p.add_argument("--input", required=True)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--output", default="-")
    p.add_argument("--allow-large", action="store_true", help="let the oracle run at m = 8")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("cost", help="training cost of a tree on a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--per-node", action="store_true")
    p.add_argument("--per-row", action="store_true")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("assign", help="positive/negative nodes of one example")
    p.add_argument("--input", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--row", required=True, type=int)
    p.set_defaults(func=cmd_assign)

    p = sub.add_parser("predict", help="simulate threshold prediction on a scenario")
    p.add_argument("--tree", required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--tau", required=True, type=float)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify", help="check cost invariants of a tree on a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="compare builders (oracle included when m <= 8)")
    p.add_argument("--input", required=True)
    p.add_argument("--methods", default=None, help="comma-separated list")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv: list[str], out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    handler: Callable = args.func
    try:
        return handler(args, out)
    except (StructureError, NotNestedError, OracleRangeError) as exc:
        err.write(f"pltcost: structure mismatch: {exc}\n")
        return 2
    except (OSError, DatasetFormatError, TreeFormatError, ScenarioError,
            InvalidTreeError, UsageError, ValueError) as exc:
        err.write(f"pltcost: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
