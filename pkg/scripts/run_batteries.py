#!/usr/bin/env python3
"""Run every verification battery and print a status table.

Exits nonzero when any battery reports a mismatch.

Example:
    python scripts/run_batteries.py --max-order 4 --corpus data/corpus
"""

import argparse
import sys

from sgplab.smallsemi import battery_ids, verify_battery


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=4)
    ap.add_argument("--corpus")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--battery", nargs="*", help="run only these battery ids")
    args = ap.parse_args()

    failures = 0
    ids = args.battery or battery_ids()
    for battery_id in ids:
        max_order = min(args.max_order, 3) if battery_id == "closure.P" else args.max_order
        report = verify_battery(battery_id, max_order, corpus_dir=args.corpus, jobs=args.jobs)
        status = "ok" if report.passed else f"{len(report.mismatches)} MISMATCHES"
        print(f"{battery_id:20s} order<={max_order} items={report.items:5d} "
              f"{report.elapsed:7.2f}s  {status}")
        for m in report.mismatches:
            print(f"  - {m.detail}")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
