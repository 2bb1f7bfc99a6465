#!/usr/bin/env python3
"""Plot learning curves from one or more `peorl train` result CSVs.

Usage: plot_results.py results.csv [more.csv ...] [--column cum_reward]
                       [--window 50] [--out curves.png]

Each CSV contributes one curve: the per-episode mean over its seeds,
smoothed with a moving average. Convenience script only; not covered by the
test suite.
"""

import argparse
import csv
import sys
from collections import defaultdict


def load(path, column):
    per_episode = defaultdict(list)
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            per_episode[int(row["episode"])].append(float(row[column]))
    episodes = sorted(per_episode)
    return episodes, [sum(per_episode[e]) / len(per_episode[e]) for e in episodes]


def smooth(values, window):
    if window <= 1:
        return values
    out = []
    acc = 0.0
    for i, v in enumerate(values):
        acc += v
        if i >= window:
            acc -= values[i - window]
        out.append(acc / min(i + 1, window))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs="+")
    parser.add_argument("--column", default="cum_reward")
    parser.add_argument("--window", type=int, default=50)
    parser.add_argument("--out", default="")
    args = parser.parse_args()

    try:
        import matplotlib

        if args.out:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required for plotting")

    for path in args.csvs:
        episodes, values = load(path, args.column)
        plt.plot(episodes, smooth(values, args.window), label=path)
    plt.xlabel("episode")
    plt.ylabel(f"{args.column} (mean over seeds, window {args.window})")
    plt.legend()
    plt.grid(True, alpha=0.3)
    if args.out:
        plt.savefig(args.out, dpi=150, bbox_inches="tight")
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
