#!/usr/bin/env python3
"""Survey the equation-system catalog: how many small semigroups satisfy each
system, and what the holds-in-all-semigroups harness concludes.

Example:
    python scripts/survey_catalog.py --max-order 4
"""

import argparse

from sgplab.eqsys import catalog, catalog_ids, satisfies
from sgplab.smallsemi import get_corpus
from sgplab.wordeq import Budgets, holds_in_all_semigroups


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=4)
    ap.add_argument("--max-len", type=int, default=3)
    ap.add_argument("--extra-letters", type=int, default=2)
    args = ap.parse_args()

    budgets = Budgets(max_len=args.max_len, extra_letters=args.extra_letters,
                      max_order=min(args.max_order, 3))
    orders = range(1, args.max_order + 1)
    header = "  ".join(f"n={n}" for n in orders)
    print(f"{'id':16s} {header}   everywhere?")
    for system_id in catalog_ids():
        e = catalog(system_id)
        counts = []
        for n in orders:
            corpus = get_corpus(n)
            counts.append(sum(satisfies(S, e).satisfied for S in corpus.entries))
        verdict = holds_in_all_semigroups(e, budgets)
        row = "  ".join(f"{c:3d}" for c in counts)
        print(f"{system_id:16s} {row}   {verdict.outcome}")


if __name__ == "__main__":
    main()
