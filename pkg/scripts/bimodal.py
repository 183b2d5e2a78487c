"""Weight histogram of a p x q column after long runs on uniform random spikes."""

import argparse

import numpy as np

from tnnsim.column import Column, ColumnConfig
from tnnsim.trace import random_inputs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=16)
    ap.add_argument("--q", type=int, default=4)
    ap.add_argument("--threshold", type=int, default=16)
    ap.add_argument("--cycles", type=int, default=10_000)
    ap.add_argument("--seeds", type=int, default=4)
    args = ap.parse_args()
    for seed in range(args.seeds):
        col = Column(ColumnConfig(p=args.p, q=args.q, threshold=args.threshold, seed=seed))
        for x in random_inputs(args.p, 3, seed, args.cycles):
            col.step(x)
        hist = np.bincount(col.weights.ravel(), minlength=8)
        frac = np.isin(col.weights, [0, 1, 6, 7]).mean()
        print(f"seed {seed}: extremes {frac:.3f} histogram {hist.tolist()}")


if __name__ == "__main__":
    main()
