"""Decompose seeded random instances and summarize leaf ranks, lengths and residuals."""

import argparse
import collections
import time

import numpy as np

from qcovar.decomposition import decompose
from qcovar.extremality import rank_bound
from qcovar.generators import InstanceSpec, random_instance


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--nmax", type=int, default=6)
    parser.add_argument("--kmax", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    leaf_ranks = collections.Counter()
    worst = collections.defaultdict(float)
    lengths = []
    at_bound = 0
    start = time.perf_counter()
    for i in range(args.count):
        n = int(rng.integers(2, args.nmax + 1))
        k = int(rng.integers(1, min(args.kmax, n * n - 1) + 1))
        r = int(rng.integers(1, n + 1))
        d, xs = random_instance(InstanceSpec("random", n, k, r, seed=args.seed * 1_000_003 + i))
        dec = decompose(d, xs)
        leaf_ranks.update(dec.ranks)
        lengths.append((r, len(dec)))
        at_bound += max(dec.ranks) == rank_bound(k)
        for key, val in dec.residuals.items():
            worst[key] = max(worst[key], val)
    elapsed = time.perf_counter() - start

    print(f"{args.count} instances in {elapsed:.2f}s")
    print("leaf rank histogram:", dict(sorted(leaf_ranks.items())))
    print(f"instances with a leaf at the rank bound: {at_bound}")
    by_rank = collections.defaultdict(list)
    for r, length in lengths:
        by_rank[r].append(length)
    for r in sorted(by_rank):
        ls = by_rank[r]
        print(f"  rank(D)={r}: mean length {np.mean(ls):.2f}, max {max(ls)} (cap {2 ** (r - 1)})")
    for key, val in sorted(worst.items()):
        print(f"max {key} residual: {val:.2e}")


if __name__ == "__main__":
    main()
