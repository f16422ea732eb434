"""Time the two nested solvers on random nondecreasing weight sequences."""

from __future__ import annotations

import argparse
import random
import time

from pltcost.matryoshka import NestedInstance, solve_nested


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--max-weight", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-dp-above", type=int, default=100000,
                    help="only run the quadratic DP up to this size")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print("m\tlws_fast_s\tdp_quadratic_s\tcost\tagree")
    for m in map(int, args.sizes.split(",")):
        inst = NestedInstance.from_weights(sorted(rng.randint(1, args.max_weight) for _ in range(m)))
        t0 = time.perf_counter()
        fast = solve_nested(inst, "lws_fast")
        t_fast = time.perf_counter() - t0
        if m <= args.skip_dp_above:
            t0 = time.perf_counter()
            dp = solve_nested(inst, "dp_quadratic")
            t_dp = f"{time.perf_counter() - t0:.3f}"
            agree = str(int(dp.structure_cost == fast.structure_cost))
        else:
            t_dp, agree = "NA", "NA"
        print(f"{m}\t{t_fast:.3f}\t{t_dp}\t{fast.structure_cost}\t{agree}")


if __name__ == "__main__":
    main()
