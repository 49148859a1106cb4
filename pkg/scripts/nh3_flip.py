"""Energy along the NH3 umbrella inversion path (fixtures/nh3_flip).

    python scripts/nh3_flip.py [--method fci|vqe] [--out results/nh3_flip.csv]

Every geometry carries Cs labels, so the filtered ansatz is the same size
along the whole path, including the planar point.
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

from symucc.solvers import pes_scan

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--dir", type=Path, default=ROOT / "fixtures" / "nh3_flip")
    ap.add_argument("--method", choices=("fci", "vqe"), default="fci")
    ap.add_argument("--out", type=Path, default=ROOT / "results" / "nh3_flip.csv")
    args = ap.parse_args()

    rows = pes_scan(sorted(args.dir.glob("*.fcidump")), method=args.method)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "angle", "energy", "n_parameters", "error"])
        for r in rows:
            angle = r.label.split("_")[-1]
            w.writerow([r.label, angle, f"{r.energy:.10f}", r.n_parameters, r.error])
            print(r.label, f"{r.energy:.8f}", r.error)


if __name__ == "__main__":
    main()
