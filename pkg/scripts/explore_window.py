#!/usr/bin/env python3
"""Resolve one window, audit it, and dump its artifacts.

Writes path CSV, hierarchy CSV, the block report JSON, and prints a
small structural summary; handy for eyeballing the renewal hierarchy.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from fivewise import SamplerConfig, audit_window, decompose_blocks, sample_path


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--length", type=int, default=20000)
    ap.add_argument("--outdir", default="window_dump")
    args = ap.parse_args()

    window = (args.start, args.start + args.length - 1)
    path = sample_path(window, SamplerConfig(seed=args.seed))
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "path.csv").write_text(path.to_csv())
    (out / "hierarchy.csv").write_text(path.hierarchy.to_csv())

    depths = path.depths
    print(f"window {window}, seed {args.seed}")
    print(f"  sign mean          {path.signs.mean():+.5f}")
    for d in range(int(depths.max()) + 1):
        frac = float((depths == d).mean())
        print(f"  depth {d}: {frac:8.5f} of positions"
              f"  (law {0.375**d * (1 - 0.375 if d else 0.625):.5f})")
    dec = decompose_blocks(path.hierarchy)
    for m in sorted(dec.depth_blocks):
        blocks = dec.depth_blocks[m]
        if blocks:
            sums = {int(np.sum(path.signs[np.array(b.members) - window[0]]))
                    for b in blocks}
            print(f"  level {m}: {len(blocks)} complete blocks, "
                  f"sums {sorted(sums)}")
    audit = audit_window(path)
    (out / "audit.json").write_text(audit.to_json())
    print(f"  audit: {audit.checked_blocks} blocks, "
          f"{'PASS' if audit.ok else 'FAIL'}")
    print(f"artifacts in {out}/")
    return 0 if audit.ok else 1


if __name__ == "__main__":
    sys.exit(main())
