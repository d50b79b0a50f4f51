"""Look for chains where log M(B^t) increases at some step.

Nothing in the theory says the sequence must be monotone; this only counts
what happens on random inputs, both dense (Sinkhorn) and sparse (mixtures of
a few permutation matrices).

    python scripts/monotonicity_probe.py --trials 500
"""

import argparse

import numpy as np

from matchfactor import convex_combination, random_bistochastic, random_permutation
from matchfactor.analysis import power_trajectory
from matchfactor.rng import SeededStream


def sparse_chain(n, seed, k=3):
    stream = SeededStream(seed)
    perms = [random_permutation(n, seed * 31 + i) for i in range(k)]
    w = stream.uniform_open(0.05, 1.0, k)
    w = w / w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return convex_combination(list(zip(w.tolist(), perms)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--tmax", type=int, default=30)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()

    for label, make in (("dense", random_bistochastic), ("sparse", sparse_chain)):
        increases, worst = 0, 0.0
        for s in range(args.trials):
            n = 2 + s % (args.max_n - 1)
            logs = np.array(power_trajectory(make(n, s), args.tmax).log_ms)
            steps = np.diff(logs)
            if np.any(steps > 1e-12):
                increases += 1
                worst = max(worst, float(steps.max()))
        print(f"{label}: {increases}/{args.trials} chains with an increase (largest step {worst:.3e})")


if __name__ == "__main__":
    main()
