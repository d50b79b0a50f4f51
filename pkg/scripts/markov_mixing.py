"""log M(B^t) for a few random bistochastic chains; CSV rows for external plotting.

    python scripts/markov_mixing.py --n 5 --chains 4 --tmax 40 > mixing.csv
"""

import argparse

from matchfactor import random_bistochastic, theorem_bounds
from matchfactor.analysis import power_trajectory


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--chains", type=int, default=4)
    ap.add_argument("--tmax", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    lo, _ = theorem_bounds(args.n)
    print("chain,t,log_m,gap_to_uniform")
    for c in range(args.chains):
        tr = power_trajectory(random_bistochastic(args.n, args.seed + c), args.tmax)
        for t, log_m in tr.samples:
            print(f"{c},{t},{log_m:.17g},{log_m - lo:.6e}")


if __name__ == "__main__":
    main()
