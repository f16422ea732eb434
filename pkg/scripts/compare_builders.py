"""Builder cost versus the exhaustive optimum on random small instances.

Prints one row per structure kind with mean and worst cost ratios.
"""

from __future__ import annotations

import argparse
import random
import statistics

from pltcost.builders import (
    WeightProfile,
    build_binary_merge,
    build_complete_ternary,
    build_ternary_huffman,
    build_ternary_shannon,
)
from pltcost.cost import total_cost
from pltcost.labels import LabelMatrix, matrix_from_columns
from pltcost.matryoshka import solve_matrix
from pltcost.oracle import optimal_cost


def multiclass(rng, m, n):
    labels = list(range(m)) + [rng.randrange(m) for _ in range(n - m)]
    return LabelMatrix.from_rows([[j] for j in labels], m)


def nested(rng, m, n):
    weights = sorted(rng.randint(1, n) for _ in range(m))
    return matrix_from_columns([range(w) for w in weights], n)


def general(rng, m, n):
    p = rng.uniform(0.1, 0.6)
    return LabelMatrix.from_rows([[j for j in range(m) if rng.random() < p] for _ in range(n)], m)


BUILDERS = {
    "ternary-complete": lambda Y: build_complete_ternary(Y.m),
    "ternary-huffman": lambda Y: build_ternary_huffman(WeightProfile.from_matrix(Y)),
    "ternary-shannon": lambda Y: build_ternary_shannon(WeightProfile.from_matrix(Y)),
    "binary-merge": build_binary_merge,
    "matryoshka": lambda Y: solve_matrix(Y)[0],
}
KINDS = {
    "multiclass": (multiclass, ["ternary-complete", "ternary-huffman", "ternary-shannon", "binary-merge"]),
    "nested": (nested, ["ternary-complete", "binary-merge", "matryoshka"]),
    "general": (general, ["ternary-complete", "binary-merge"]),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--max-m", type=int, default=6)
    ap.add_argument("--max-n", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print("kind\tmethod\tmean_ratio\tmax_ratio")
    for kind, (make, methods) in KINDS.items():
        ratios = {name: [] for name in methods}
        for _ in range(args.trials):
            m = rng.randint(2, args.max_m)
            Y = make(rng, m, rng.randint(m, args.max_n))
            opt = optimal_cost(Y)
            for name in methods:
                ratios[name].append(total_cost(BUILDERS[name](Y), Y) / opt)
        for name in methods:
            r = ratios[name]
            print(f"{kind}\t{name}\t{statistics.mean(r):.4f}\t{max(r):.4f}")


if __name__ == "__main__":
    main()
