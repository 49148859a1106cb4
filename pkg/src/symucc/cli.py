"""Command-line front end: ``symucc <subcommand> ...``.

Exit codes: 0 success, 1 domain or I/O error (one JSON line on stderr),
2 usage error. ``SYMUCC_THREADS`` caps BLAS/OpenMP worker threads.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from .circuit import build_ansatz, to_qasm
from .errors import SymuccError
from .fermionics import enumerate_pool
from .integrals import IntegralTable, hf_energy, read_fcidump, reference_determinant
from .noise import NoiseSpec, noisy_energy, zne_energy
from .solvers import (
    FCI_MAX_QUBITS,
    Problem,
    VqeOptions,
    adapt_vqe,
    fci_solve,
    pes_scan,
    sector_basis,
    vqe_minimize,
)
from .symmetry import (
    PointGroup,
    check_orbsym,
    filter_pool,
    group_of_tag,
    irrep_census,
    point_group,
    read_orbsym,
    subgroup_scan,
)

VQE_SCHEMA = """report JSON: {molecule, n_qubits, group, params_before, params_after,
e_hf, e_fci, e_final, delta_fci, delta_unfiltered,
iterations: [{k, e, gnorm}]} (energies in Hartree; null when not computed)"""


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def _load(args) -> tuple[IntegralTable, PointGroup | None]:
    table = read_fcidump(args.fcidump)
    if getattr(args, "orbsym", None):
        table = table.with_orbsym(read_orbsym(args.orbsym))
    group = None
    if getattr(args, "group", None):
        try:
            group = point_group(args.group)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if group.order == 1:
            # every orbital is totally symmetric in C1
            table = table.with_orbsym([1] * table.n_spatial)
        check_orbsym(table, group)
    return table, group


def _problem(args) -> tuple[Problem, PointGroup | None]:
    table, group = _load(args)
    return Problem.from_table(table, Path(args.fcidump).name.split(".")[0]), group


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _options(args) -> VqeOptions:
    return VqeOptions(max_iter=args.max_iter, tol=args.tol)


# ------------------------------------------------------------- subcommands


def cmd_pool(args) -> int:
    table, group = _load(args)
    pool = enumerate_pool(table)
    kept = filter_pool(pool, table, 0) if not args.no_filter else pool
    ratio = len(kept) / len(pool) if pool else 1.0
    text = f"before={len(pool)} after={len(kept)} ratio={ratio:.4f}\n"
    if args.census:
        text += _census_csv(pool, table, group)
    _emit(text, args.out)
    return 0


def _census_csv(pool, table, group) -> str:
    if group is not None:
        n_labels = group.order
    else:
        n_labels = 1
        while n_labels < max(table.orbsym):
            n_labels *= 2
    counts = irrep_census(pool, table, n_labels)
    rows = []
    for label in range(n_labels):
        name = group.irrep_name(label) if group else str(label + 1)
        s, d = counts[label]
        rows.append([name, s, d, s + d])
    ts = sum(r[1] for r in rows)
    td = sum(r[2] for r in rows)
    rows.append(["total", ts, td, ts + td])
    return _csv(["irrep", "singles", "doubles", "total"], rows)


def cmd_census(args) -> int:
    table, group = _load(args)
    _emit(_census_csv(enumerate_pool(table), table, group), args.out)
    return 0


def cmd_compile(args) -> int:
    prob, _ = _problem(args)
    circ = prob.circuit(not args.no_filter)
    ref = reference_determinant(prob.table).spin_orbitals()
    if args.out:
        Path(args.out).write_text(to_qasm(circ, reference=ref))
    report = circ.resource.to_dict()
    _emit(_json(report), args.report)
    return 0


def _vqe_report(prob: Problem, group, args) -> dict:
    opts = _options(args)
    e_fci = fci_solve(prob.hamiltonian, prob.table.n_electrons).energy if prob.n_qubits <= FCI_MAX_QUBITS else None
    e_hf = hf_energy(prob.table)
    filtered = not args.no_filter
    pool = prob.filtered_pool() if filtered else prob.pool
    if args.adapt:
        rep = adapt_vqe(pool, prob.hamiltonian, prob.state0, args.epsilon, options=opts)
        e_final = rep.final_energy
        iterations = [{"k": k, "e": e, "gnorm": g} for k, (e, g) in enumerate(zip(rep.energies, rep.gradient_norms))]
        extra = {"adapt": {"epsilon": args.epsilon, "n_operators": rep.n_operators,
                           "selected": [str(e) for e in rep.selected], "converged": rep.converged}}
        params_after = rep.n_operators
    else:
        circ = build_ansatz(pool, prob.table)
        rep = vqe_minimize(circ, prob.hamiltonian, prob.state0, opts)
        e_final = rep.final_energy
        iterations = [{"k": k, "e": e, "gnorm": g} for k, e, g in rep.iterations]
        extra = {"converged": rep.converged}
        params_after = circ.n_parameters
    delta_unf = None
    if args.compare and filtered:
        base = vqe_minimize(build_ansatz(prob.pool, prob.table), prob.hamiltonian, prob.state0, opts)
        delta_unf = e_final - base.final_energy
    return {
        "molecule": prob.name,
        "n_qubits": prob.n_qubits,
        "group": group.name if group else None,
        "params_before": len(prob.pool),
        "params_after": params_after,
        "e_hf": e_hf,
        "e_fci": e_fci,
        "e_final": e_final,
        "delta_fci": None if e_fci is None else e_final - e_fci,
        "delta_unfiltered": delta_unf,
        "iterations": iterations,
        **extra,
    }


def cmd_vqe(args) -> int:
    prob, group = _problem(args)
    _emit(_json(_vqe_report(prob, group, args)), args.out)
    return 0


def cmd_adapt(args) -> int:
    args.adapt = True
    return cmd_vqe(args)


def cmd_fci(args) -> int:
    prob, _ = _problem(args)
    res = fci_solve(prob.hamiltonian, prob.table.n_electrons)
    _emit(_json({
        "molecule": prob.name,
        "n_qubits": prob.n_qubits,
        "sector_dim": int(len(sector_basis(prob.n_qubits, prob.table.n_electrons))),
        "e_hf": hf_energy(prob.table),
        "e_fci": res.energy,
        "residual": res.residual,
    }), args.out)
    return 0


def cmd_scan(args) -> int:
    paths = list(args.fcidump)
    if args.dir:
        paths += sorted(str(p) for p in Path(args.dir).glob("*.fcidump"))
    if not paths:
        raise UsageError("scan needs --fcidump files or --dir")
    rows = pes_scan(paths, args.method, not args.no_filter, _options(args))
    _emit(_csv(["label", "energy", "n_parameters", "error"],
               [[r.label, "" if math.isnan(r.energy) else repr(r.energy), r.n_parameters, r.error] for r in rows]),
          args.out)
    return 0


def cmd_noise_sweep(args) -> int:
    prob, _ = _problem(args)
    circ = prob.circuit(not args.no_filter)
    params = vqe_minimize(circ, prob.hamiltonian, prob.state0, _options(args)).final_params
    p1s = args.p1 if args.p1 is not None else args.p2
    if len(p1s) != len(args.p2):
        raise UsageError("--p1 and --p2 need the same number of values")
    rows = []
    for k, (p1, p2) in enumerate(zip(p1s, args.p2)):
        spec = NoiseSpec(p1=p1, p2=p2, shots=args.shots, trajectories=args.trajectories, fold_factors=args.folds)
        seed = args.seed + 7919 * k
        mean, err = noisy_energy(params, circ, prob.hamiltonian, prob.state0, spec, seed=seed)
        zne = zne_energy(params, circ, prob.hamiltonian, prob.state0, spec, seed=seed)[0] if args.zne else None
        rows.append([repr(p2), args.shots, repr(mean), repr(err), "" if zne is None else repr(zne)])
    _emit(_csv(["p", "shots", "E_mean", "E_stderr", "E_zne"], rows), args.out)
    return 0


def cmd_subgroup_scan(args) -> int:
    table = read_fcidump(args.fcidump)
    files = [Path(p) for p in args.orbsym]
    if not files:
        fd = Path(args.fcidump)
        stem = fd.name.removesuffix(".fcidump")
        files = sorted(fd.parent.glob(f"{stem}.*.orbsym"))
    if not files:
        raise UsageError("no orbsym relabelling files given or found next to the FCIDUMP")
    relabel = {}
    for f in files:
        tag = f.name.removesuffix(".orbsym").split(".")[-1]
        relabel[tag] = read_orbsym(f)
    counts = subgroup_scan(table, relabel)
    rows = []
    for tag in relabel:
        try:
            g = group_of_tag(tag)
            gname, order = g.name, g.order
            check_orbsym(table.with_orbsym(relabel[tag]), g)
        except ValueError:
            gname, order = "", ""
        rows.append([tag, gname, order, counts[tag]])
    rows.sort(key=lambda r: (r[2] if r[2] != "" else 0, r[0]))
    _emit(_csv(["tag", "group", "order", "survivors"], rows), args.out)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symucc", description="Point-group reduced UCCSD-VQE toolkit.")
    sub = p.add_subparsers(dest="command", required=True, metavar="<command>")

    def add(name, func, help_text, schema=None, fcidump=True):
        sp = sub.add_parser(name, help=help_text, description=help_text, epilog=schema,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        if fcidump:
            sp.add_argument("--fcidump", required=True, help="integral file (Molpro FCIDUMP)")
        sp.set_defaults(func=func)
        return sp

    def group_args(sp):
        sp.add_argument("--group", help="Abelian point group (D2h, C2v, C2h, D2, C2, Cs, Ci, C1); C1 disables filtering")
        sp.add_argument("--orbsym", help="file of per-orbital irrep labels replacing the FCIDUMP ORBSYM")

    def opt_args(sp):
        sp.add_argument("--tol", type=float, default=1e-6, help="convergence threshold on |dE| and max |grad| (default 1e-6)")
        sp.add_argument("--max-iter", type=int, default=2000, help="optimizer iteration cap")

    sp = add("pool", cmd_pool, "Pool size before and after symmetry filtering.",
             "prints: before=<n> after=<m> ratio=<m/n>; --census appends the irrep CSV")
    group_args(sp)
    sp.add_argument("--no-filter", action="store_true", help="report the unfiltered pool")
    sp.add_argument("--census", action="store_true", help="append the per-irrep census CSV")
    sp.add_argument("--out", help="output file (default stdout)")

    sp = add("census", cmd_census, "Per-irrep count of single and double excitations.",
             "CSV columns: irrep, singles, doubles, total; last row holds the totals")
    group_args(sp)
    sp.add_argument("--out")

    sp = add("compile", cmd_compile, "Compile the Trotterized ansatz to OpenQASM 2.",
             "stdout/--report JSON: {parameters, rotations, rz, cnot, basis, depth}")
    group_args(sp)
    sp.add_argument("--no-filter", action="store_true", help="compile the full UCCSD pool")
    sp.add_argument("--out", help="QASM output path")
    sp.add_argument("--report", help="resource report path (default stdout)")

    for name, func, text in (("vqe", cmd_vqe, "Run VQE with the (Sym)UCCSD ansatz."),
                             ("adapt", cmd_adapt, "Run ADAPT-VQE over the (filtered) pool.")):
        sp = add(name, func, text, VQE_SCHEMA)
        group_args(sp)
        opt_args(sp)
        sp.add_argument("--no-filter", action="store_true", help="use the full UCCSD pool")
        if name == "vqe":
            sp.add_argument("--adapt", action="store_true", help="grow the ansatz with ADAPT-VQE")
        sp.add_argument("--epsilon", type=float, default=1e-2, help="ADAPT gradient-norm threshold")
        sp.add_argument("--compare", action="store_true", help="also optimize the unfiltered ansatz for delta_unfiltered")
        sp.add_argument("--out", help="report path (default stdout)")
        if name == "adapt":
            sp.set_defaults(adapt=True)

    sp = add("fci", cmd_fci, "Exact ground energy in the N, Sz=0 sector.",
             "JSON: {molecule, n_qubits, sector_dim, e_hf, e_fci, residual}")
    group_args(sp)
    sp.add_argument("--out")

    sp = add("scan", cmd_scan, "Solve a series of fixtures (e.g. a potential-energy curve).",
             "CSV columns: label, energy, n_parameters, error", fcidump=False)
    sp.add_argument("--fcidump", nargs="*", default=[], help="fixture files")
    sp.add_argument("--dir", help="directory whose *.fcidump files are scanned")
    sp.add_argument("--method", choices=("vqe", "fci"), default="vqe")
    sp.add_argument("--no-filter", action="store_true")
    opt_args(sp)
    sp.add_argument("--out")

    sp = add("noise-sweep", cmd_noise_sweep, "Noisy energies of the optimized ansatz over depolarizing rates.",
             "CSV columns: p, shots, E_mean, E_stderr, E_zne (empty without --zne)")
    group_args(sp)
    opt_args(sp)
    sp.add_argument("--p2", type=_floats, required=True, help="comma-separated two-qubit error rates")
    sp.add_argument("--p1", type=_floats, help="one-qubit rates (default: equal to --p2)")
    sp.add_argument("--shots", type=int, default=0, help="shots per Pauli term (0 = exact)")
    sp.add_argument("--trajectories", type=int, default=200)
    sp.add_argument("--folds", type=_ints, default=(1, 3, 5), help="odd fold factors for ZNE")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--zne", action="store_true", help="add zero-noise extrapolated energies")
    sp.add_argument("--no-filter", action="store_true")
    sp.add_argument("--out")

    sp = add("subgroup-scan", cmd_subgroup_scan, "Survivor counts under subgroup relabelings.",
             "CSV columns: tag, group, order, survivors. Relabelings default to <stem>.<tag>.orbsym next to the FCIDUMP")
    sp.add_argument("--orbsym", nargs="*", default=[], help="relabelling files named <stem>.<tag>.orbsym")
    sp.add_argument("--out")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    threads = os.environ.get("SYMUCC_THREADS")
    try:
        if threads:
            with threadpool_limits(limits=int(threads)):
                return args.func(args)
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"symucc: error: {exc}", file=sys.stderr)
        return 2
    except (SymuccError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
