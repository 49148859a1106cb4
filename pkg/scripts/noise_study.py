"""H4 under depolarizing noise and finite shots.

    python scripts/noise_study.py [--trajectories 2000] [--seeds 16] [--outdir results]

Writes two CSV files:
  noise_zne.csv     raw and extrapolated energies vs two-qubit error rate
                    at the noiseless-optimal SymUCCSD parameters
  noise_shots.csv   shot-sampled VQE (COBYLA) final energies for SymUCCSD and
                    UCCSD: per shot count the seed mean and standard deviation
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
from pathlib import Path

from symucc.noise import NoiseSpec, zne_energy
from symucc.simulator import energy
from symucc.solvers import Problem, fci_solve, shot_study, vqe_minimize

ROOT = Path(__file__).resolve().parent.parent


@dataclasses.dataclass
class Config:
    fcidump: Path = ROOT / "fixtures" / "h4.fcidump"
    outdir: Path = ROOT / "results"
    p2: tuple[float, ...] = (1e-4, 3e-4, 1e-3, 3e-3)
    trajectories: int = 2000
    folds: tuple[int, ...] = (1, 3, 5)
    shots: tuple[int, ...] = tuple(2**k for k in range(10, 21))
    seeds: int = 16
    seed: int = 0


def zne_sweep(cfg: Config, prob: Problem) -> list[list]:
    circ = prob.circuit()
    theta = vqe_minimize(circ, prob.hamiltonian, prob.state0).final_params
    exact = energy(theta, circ, prob.hamiltonian, prob.state0)
    rows = []
    for k, p in enumerate(cfg.p2):
        spec = NoiseSpec(p1=p, p2=p, trajectories=cfg.trajectories, fold_factors=cfg.folds)
        zne, points = zne_energy(theta, circ, prob.hamiltonian, prob.state0, spec, seed=cfg.seed + 7919 * k)
        rows.append([p, exact, points[0][1], zne, abs(points[0][1] - exact), abs(zne - exact)])
        print(f"p={p:.0e} raw err {rows[-1][4] * 1e3:.3f} mHa, zne err {rows[-1][5] * 1e3:.3f} mHa", flush=True)
    return rows


def shots_sweep(cfg: Config, prob: Problem) -> list[list]:
    circuits = {"sym": prob.circuit(True), "ucc": prob.circuit(False)}
    study = shot_study(circuits, prob.hamiltonian, prob.state0, cfg.shots, range(cfg.seeds))
    e_fci = fci_solve(prob.hamiltonian, prob.table.n_electrons).energy
    rows = []
    for i, n in enumerate(cfg.shots):
        row = [n]
        for label in circuits:
            ex, est = study.exact[label][i], study.estimated[label][i]
            row += [ex.mean() - e_fci, ex.std(ddof=1), est.mean() - e_fci, est.std(ddof=1)]
        rows.append(row)
    for label in circuits:
        print(f"{label}: mean seed-to-seed std {study.fluctuation(label) * 1e3:.2f} mHa", flush=True)
    gap = study.mean_energy("sym")[-1] - study.mean_energy("ucc")[-1]
    print(f"sym - ucc at {cfg.shots[-1]} shots: {gap * 1e3:.3f} mHa")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--trajectories", type=int, default=Config.trajectories)
    ap.add_argument("--seeds", type=int, default=Config.seeds)
    ap.add_argument("--outdir", type=Path, default=Config.outdir)
    ap.add_argument("--skip-shots", action="store_true")
    args = ap.parse_args()
    cfg = Config(trajectories=args.trajectories, seeds=args.seeds, outdir=args.outdir)
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    prob = Problem.from_fcidump(cfg.fcidump)

    with (cfg.outdir / "noise_zne.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "E_exact", "E_raw", "E_zne", "err_raw", "err_zne"])
        w.writerows(zne_sweep(cfg, prob))
    if args.skip_shots:
        return
    with (cfg.outdir / "noise_shots.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["shots"] + [f"{lab}_{col}" for lab in ("sym", "ucc")
                                for col in ("exact_err", "exact_std", "est_err", "est_std")])
        w.writerows(shots_sweep(cfg, prob))


if __name__ == "__main__":
    main()
