#!/usr/bin/env python3
"""Enumerate small semigroups and persist them as a corpus directory.

Example:
    python scripts/build_corpus.py --out data/corpus --max-order 4 --jobs 2
"""

import argparse
import time

from sgplab.smallsemi import enumerate_semigroups, save_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True)
    ap.add_argument("--max-order", type=int, default=4)
    ap.add_argument("--modes", nargs="+", default=["isomorphism", "equivalence"])
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    for order in range(1, args.max_order + 1):
        for mode in args.modes:
            t0 = time.perf_counter()
            corpus = enumerate_semigroups(order, mode, jobs=args.jobs)
            save_corpus(corpus, args.out)
            print(f"order={order} mode={mode} count={len(corpus)} "
                  f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
