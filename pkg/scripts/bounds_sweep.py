"""Sample random bistochastic matrices and report where log M lands between the bounds.

    python scripts/bounds_sweep.py --orders 2 3 4 8 16 64 --samples 200
"""

import argparse
import math

import numpy as np

from matchfactor import matching_factor, permutation_proximity, random_bistochastic, theorem_bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", type=int, nargs="+", default=[2, 3, 4, 8, 16, 64])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("n,lower_bound,min_log_m,mean_log_m,max_log_m,mean_proximity,violations")
    for n in args.orders:
        lo, hi = theorem_bounds(n)
        logs, rhos = [], []
        for s in range(args.samples):
            prof = matching_factor(random_bistochastic(n, args.seed + s))
            logs.append(prof.log_m)
            rhos.append(permutation_proximity(prof))
        logs = np.array(logs)
        slack = n * 1e-6
        violations = int(np.sum((logs < lo - slack) | (logs > hi + slack)))
        print(
            f"{n},{lo:.6f},{logs.min():.6f},{logs.mean():.6f},{logs.max():.6f},"
            f"{np.mean(rhos):.6f},{violations}"
        )


if __name__ == "__main__":
    main()
