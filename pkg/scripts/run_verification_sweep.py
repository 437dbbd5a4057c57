#!/usr/bin/env python3
"""Sweep all labeled real Schur roots and compare CC functions against
mutation-found cluster variables, on every bundled fixture."""

import argparse
import json
import sys
import time

from clustercc.cli import verification_sweep
from clustercc.fixtures import FIXTURES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=3,
                    help="orbit depth bound for the infinite families")
    ap.add_argument("--fixture", choices=sorted(FIXTURES), action="append",
                    help="restrict to one or more fixtures")
    ap.add_argument("--json", help="write the full reports to this file")
    args = ap.parse_args()

    names = args.fixture or sorted(FIXTURES)
    reports = {}
    failures = 0
    for name in names:
        t = FIXTURES[name]()
        t0 = time.time()
        rep = verification_sweep(t, args.depth)
        reports[name] = rep
        failures += rep["total"] - rep["equal"]
        print(f"{name:10s} depth {args.depth}: {rep['equal']}/{rep['total']} "
              f"roots verified in {time.time() - t0:.2f}s")
        for rec in rep["records"]:
            if not rec["equal"]:
                print(f"  MISMATCH at {rec['label']} rank {rec['rank']}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2)
        print(f"reports written to {args.json}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
