"""Largest extreme rank attained vs floor(sqrt(k + 1)) using padded Gell-Mann tuples."""

import argparse
from math import isqrt

from qcovar.extremality import is_extreme, rank_bound
from qcovar.generators import padded_gellmann


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kmax", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'k':>4} {'bound':>5} {'rank':>4} {'size':>4} {'extreme':>7} {'span':>5}")
    for k in range(3, args.kmax + 1):
        n = isqrt(k + 1)
        extra = k - (n * n - 1)
        m = max(1, isqrt(extra - 1) + 1 if extra else 1)
        d, xs = padded_gellmann(n, k, m, seed=args.seed)
        rep = is_extreme(d, xs)
        print(f"{k:>4} {rank_bound(k):>5} {rep.rank:>4} {d.shape[0]:>4} {str(rep.extreme):>7} {rep.span_rank:>5}")


if __name__ == "__main__":
    main()
