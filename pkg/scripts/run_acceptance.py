#!/usr/bin/env python3
"""Run every acceptance-scale verification campaign and print one line
per criterion.  Equivalent to `pytest tests/test_acceptance.py -s` but
usable without pytest; writes the combined JSON report next to the
script output.

Takes a few minutes; pass --quick for a reduced-scale smoke run.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from fivewise import campaigns


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="reduced scales (smoke run, not the gate)")
    ap.add_argument("--out", default="acceptance_report.json")
    args = ap.parse_args()

    full = not args.quick
    plan = [
        ("measures", dict(draws=10**6 if full else 10**5)),
        ("chain", dict(steps=10**6 if full else 10**5,
                       gaps_target=10**5 if full else 10**4)),
        ("pattern", dict(positions=10**8 if full else 10**6)),
        ("hierarchy", dict(positions=10**7 if full else 10**6,
                           gaps2=10**4 if full else 10**3)),
        ("tails", dict(positions=10**7 if full else 10**6)),
        ("double-one", dict(reps1=10**4 if full else 10**3,
                            reps2=10**3 if full else 10**2)),
        ("blocks", dict(window_len=10**5 if full else 10**4)),
        ("independence", dict(replicates=2 * 10**5 if full else 2 * 10**4,
                              sets=50 if full else 10)),
        ("moments", dict(replicates=10**5 if full else 10**4,
                         lengths=(96, 1000) if full else (96,))),
        ("self-oracle", dict(replicates=10**5 if full else 10**4)),
        ("cross-mode", dict() if full else dict(anchors_target=10**4)),
    ]
    reports, ok = [], True
    for name, kwargs in plan:
        t0 = time.time()
        rep = campaigns.run_campaign(name, **kwargs)
        status = ("BUDGET" if rep.budget_exceeded
                  else "PASS" if rep.passed else "FAIL")
        print(f"[{status}] {name:14s} ({time.time() - t0:6.1f}s)",
              flush=True)
        for e in rep.estimates:
            if e.verdict == "fail":
                print(f"    FAIL {e.name}: {e.value} (target {e.target})")
        reports.append(json.loads(rep.to_json()))
        ok &= rep.passed
    Path(args.out).write_text(json.dumps(reports, indent=1))
    print(f"wrote {args.out}")
    print("overall:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
