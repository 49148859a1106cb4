"""ADAPT-VQE on BeH2 with the full pool, the symmetry-filtered pool and the wrong-irrep remainder.

    python scripts/adapt_beh2.py [--epsilon 1e-2] [--out results/adapt_beh2.json]
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from symucc.integrals import hf_energy
from symucc.solvers import Problem, adapt_vqe, fci_solve
from symucc.symmetry import excitation_irrep

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--fcidump", type=Path, default=ROOT / "fixtures" / "beh2.fcidump")
    ap.add_argument("--epsilon", type=float, default=1e-2)
    ap.add_argument("--out", type=Path, default=ROOT / "results" / "adapt_beh2.json")
    args = ap.parse_args()

    prob = Problem.from_fcidump(args.fcidump)
    pools = {
        "full": prob.pool,
        "symmetric": prob.filtered_pool(),
        "wrong_irrep": [e for e in prob.pool if excitation_irrep(e, prob.table) != 0],
    }
    report = {"e_hf": hf_energy(prob.table), "e_fci": fci_solve(prob.hamiltonian, prob.table.n_electrons).energy,
              "epsilon": args.epsilon, "runs": {}}
    for label, pool in pools.items():
        t0 = time.perf_counter()
        rep = adapt_vqe(pool, prob.hamiltonian, prob.state0, epsilon=args.epsilon)
        d = rep.to_dict()
        d["seconds"] = round(time.perf_counter() - t0, 1)
        d["delta_fci"] = rep.final_energy - report["e_fci"]
        report["runs"][label] = d
        print(f"{label:12s} pool={len(pool):3d} ops={rep.n_operators:3d} E={rep.final_energy:.8f} "
              f"dFCI={d['delta_fci']:.2e} ({d['seconds']}s)", flush=True)

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(report, indent=2) + "\n")


if __name__ == "__main__":
    main()
