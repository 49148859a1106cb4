"""Pool sizes before/after symmetry filtering and VQE energy errors per molecule.

    python scripts/table_pools.py [--out results/table_pools.csv] [--max-qubits 14]

Energies are computed only for fixtures with at most ``--max-qubits`` qubits;
larger ones get pool counts only.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import time
from pathlib import Path

from symucc.solvers import Problem, VqeOptions, fci_solve, vqe_minimize

ROOT = Path(__file__).resolve().parent.parent


@dataclasses.dataclass
class Config:
    molecules: tuple[str, ...] = ("h2", "h4", "hf", "lih", "beh2", "h2o", "nh3", "ch4")
    fixtures: Path = ROOT / "fixtures"
    out: Path = ROOT / "results" / "table_pools.csv"
    max_qubits: int = 14
    tol: float = 1e-6


def run(cfg: Config) -> list[dict]:
    rows = []
    for name in cfg.molecules:
        prob = Problem.from_fcidump(cfg.fixtures / f"{name}.fcidump")
        row = {"molecule": name, "n_qubits": prob.n_qubits, "before": len(prob.pool),
               "after": len(prob.filtered_pool())}
        row["ratio"] = round(row["after"] / row["before"], 4)
        if prob.n_qubits <= cfg.max_qubits:
            t0 = time.perf_counter()
            opts = VqeOptions(tol=cfg.tol)
            e_fci = fci_solve(prob.hamiltonian, prob.table.n_electrons).energy
            sym = vqe_minimize(prob.circuit(True), prob.hamiltonian, prob.state0, opts)
            ucc = vqe_minimize(prob.circuit(False), prob.hamiltonian, prob.state0, opts)
            row.update(e_fci=e_fci, e_sym=sym.final_energy, e_ucc=ucc.final_energy,
                       delta_fci=sym.final_energy - e_fci, delta_ucc=sym.final_energy - ucc.final_energy,
                       seconds=round(time.perf_counter() - t0, 1))
        print(row, flush=True)
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--max-qubits", type=int, default=Config.max_qubits)
    args = ap.parse_args()
    cfg = Config(out=args.out, max_qubits=args.max_qubits)
    rows = run(cfg)
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    fields = list(dict.fromkeys(k for r in rows for k in r))
    with cfg.out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
