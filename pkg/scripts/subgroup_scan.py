"""Surviving BeH2 parameters under every Abelian subgroup labelling shipped in fixtures/.

    python scripts/subgroup_scan.py [--out results/subgroup_scan.csv]

Each ``beh2.<tag>.orbsym`` file relabels the orbitals by the irreps of one
subgroup; survivors should scale roughly as 1/|G|.
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

from symucc.integrals import read_fcidump
from symucc.symmetry import point_group, read_orbsym, subgroup_scan

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--fixtures", type=Path, default=ROOT / "fixtures")
    ap.add_argument("--out", type=Path, default=ROOT / "results" / "subgroup_scan.csv")
    args = ap.parse_args()

    table = read_fcidump(args.fixtures / "beh2.fcidump")
    labels = {p.name.split(".")[1]: read_orbsym(p) for p in sorted(args.fixtures.glob("beh2.*.orbsym"))}
    counts = subgroup_scan(table, labels)
    rows = []
    for tag, n in counts.items():
        group = point_group(tag.split("_")[0])
        rows.append((tag, group.name, group.order, n, round(counts["c1"] / group.order, 1)))
    rows.sort(key=lambda r: (r[2], -r[3], r[0]))

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tag", "group", "order", "survivors", "full_over_order"])
        w.writerows(rows)
    for r in rows:
        print(*r, sep="\t")


if __name__ == "__main__":
    main()
