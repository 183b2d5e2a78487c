"""Clustering and classification suites over a range of seeds."""

import argparse
import statistics

from tnnsim import bench


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=6)
    ap.add_argument("--cycles", type=int, default=1500)
    args = ap.parse_args()
    for name, suite in bench.SUITES.items():
        metric = "purity" if name == "clustering" else "accuracy"
        learned, chance = [], []
        for seed in range(args.seeds):
            res = suite(seed=seed, cycles=args.cycles)
            learned.append(res["learned"][metric])
            chance.append(res["chance"][metric])
        print(f"{name}: {metric} learned {statistics.mean(learned):.3f} (min {min(learned):.3f}), "
              f"chance {statistics.mean(chance):.3f}")


if __name__ == "__main__":
    main()
