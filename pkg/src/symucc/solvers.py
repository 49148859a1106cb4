"""VQE and ADAPT-VQE drivers and the exact sector-restricted FCI oracle."""

from __future__ import annotations

import dataclasses
import logging
import math
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.optimize
import scipy.sparse.linalg

from .circuit import AnsatzCircuit, build_ansatz
from .errors import CapacityError, ContractViolation, OptimizerDiverged, SymuccError
from .fermionics import Excitation, enumerate_pool, generator
from .integrals import IntegralTable, hf_energy, read_fcidump, reference_determinant
from .noise import make_rng, sampled_energy
from .pauli import PauliSum, jw_map, qubit_hamiltonian
from .simulator import (
    apply_circuit,
    apply_observable,
    apply_pauli,
    energy_and_gradient,
    expectation,
    prepare_reference,
)
from .symmetry import filter_pool

log = logging.getLogger(__name__)

FCI_MAX_QUBITS = 16
DENSE_LIMIT = 4096


# ------------------------------------------------------------------- setup


@dataclasses.dataclass
class Problem:
    """Everything derived from one integral table that the solvers share."""

    table: IntegralTable
    hamiltonian: PauliSum
    state0: np.ndarray
    pool: list[Excitation]
    name: str = ""

    @classmethod
    def from_table(cls, table: IntegralTable, name: str = "") -> "Problem":
        ham = qubit_hamiltonian(table)
        state0 = prepare_reference(table.n_qubits, reference_determinant(table))
        return cls(table, ham, state0, enumerate_pool(table), name)

    @classmethod
    def from_fcidump(cls, path) -> "Problem":
        return cls.from_table(read_fcidump(path), Path(path).name.split(".")[0])

    @property
    def n_qubits(self) -> int:
        return self.table.n_qubits

    def filtered_pool(self) -> list[Excitation]:
        return filter_pool(self.pool, self.table, 0)

    def circuit(self, filtered: bool = True) -> AnsatzCircuit:
        return build_ansatz(self.filtered_pool() if filtered else self.pool, self.table)


# --------------------------------------------------------------------- VQE


@dataclasses.dataclass(frozen=True)
class VqeOptions:
    max_iter: int = 2000
    tol: float = 1e-6
    restarts: int = 5


@dataclasses.dataclass
class VqeReport:
    iterations: list[tuple[int, float, float]]
    final_params: np.ndarray
    final_energy: float
    converged: bool
    n_parameters: int
    n_evaluations: int = 0
    deltas: dict[str, float] = dataclasses.field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_parameters": self.n_parameters,
            "final_energy": self.final_energy,
            "converged": self.converged,
            "n_evaluations": self.n_evaluations,
            "final_params": [float(v) for v in self.final_params],
            "deltas": dict(self.deltas),
            "iterations": [{"k": k, "e": e, "gnorm": g} for k, e, g in self.iterations],
        }


def vqe_minimize(
    circuit: AnsatzCircuit,
    H: PauliSum,
    state0: np.ndarray,
    options: VqeOptions = VqeOptions(),
    x0=None,
) -> VqeReport:
    """BFGS with analytic gradients, starting from theta = 0 unless ``x0`` is given.

    Converged means both the last energy change and the gradient max-norm are
    below ``options.tol``. When BFGS stops on precision loss before that, it is
    restarted from the current point with a fresh Hessian estimate.
    """
    if options.tol <= 0:
        raise ContractViolation("tol must be positive")
    n = circuit.n_parameters
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    if x.shape != (n,):
        raise ContractViolation(f"x0 has shape {x.shape}, circuit has {n} parameters")

    e0, g0 = energy_and_gradient(x, circuit, H, state0)
    trace = [(0, e0, float(np.max(np.abs(g0), initial=0.0)))]
    if n == 0:
        return VqeReport(trace, x, e0, True, 0, 1)

    cache: dict[bytes, tuple[float, np.ndarray]] = {}
    evals = 1

    def fun(theta):
        nonlocal evals
        key = theta.tobytes()
        if key not in cache:
            evals += 1
            e, g = energy_and_gradient(theta, circuit, H, state0)
            if not (math.isfinite(e) and np.all(np.isfinite(g))):
                raise OptimizerDiverged(f"non-finite energy {e} at evaluation {evals}", trace)
            cache.clear()
            cache[key] = (e, g)
        return cache[key]

    last = [x.copy()]

    def record(theta):
        e, g = fun(theta)
        trace.append((len(trace), e, float(np.max(np.abs(g)))))
        last[0] = np.array(theta, copy=True)

    converged = False
    for attempt in range(options.restarts + 1):
        budget = options.max_iter - (len(trace) - 1)
        if budget <= 0:
            break
        res = scipy.optimize.minimize(
            lambda t: fun(t)[0],
            x,
            jac=lambda t: fun(t)[1],
            method="BFGS",
            callback=record,
            options={"gtol": options.tol, "maxiter": budget},
        )
        x = res.x
        if not np.array_equal(x, last[0]):
            record(x)
        e, g = fun(x)
        gnorm = float(np.max(np.abs(g)))
        de = abs(trace[-1][1] - trace[-2][1]) if len(trace) > 1 else math.inf
        if gnorm < options.tol and de < options.tol:
            converged = True
            break
        if res.status == 1:  # iteration budget exhausted
            break
        log.debug("BFGS stopped (%s) with gnorm %.2e; restarting", res.message, gnorm)
    e, _ = fun(x)
    return VqeReport(trace, x, e, converged, n, evals)


# --------------------------------------------------------------------- FCI


@dataclasses.dataclass
class FciResult:
    energy: float
    vector: np.ndarray  # amplitudes on the full 2^n basis
    basis: np.ndarray  # sector basis indices
    residual: float


def sector_basis(n_qubits: int, n_electrons: int, sz2: int = 0) -> np.ndarray:
    """Basis indices with ``n_electrons`` set bits and n_alpha - n_beta = sz2.

    Even qubits are alpha spin orbitals, odd qubits beta.
    """
    n_spatial = n_qubits // 2
    if (n_electrons + sz2) % 2:
        return np.zeros(0, dtype=np.int64)
    n_a, n_b = (n_electrons + sz2) // 2, (n_electrons - sz2) // 2
    if min(n_a, n_b) < 0:
        return np.zeros(0, dtype=np.int64)
    alphas = [sum(1 << (2 * p) for p in occ) for occ in combinations(range(n_spatial), n_a)]
    betas = [sum(1 << (2 * p + 1) for p in occ) for occ in combinations(range(n_spatial), n_b)]
    return np.array(sorted(a | b for a in alphas for b in betas), dtype=np.int64)


def fci_solve(H: PauliSum, n_electrons: int, sz: float = 0, n_qubits: int | None = None) -> FciResult:
    """Lowest eigenpair of H inside the fixed particle-number, fixed S_z sector."""
    n = H.n_qubits if n_qubits is None else n_qubits
    if n > FCI_MAX_QUBITS:
        raise CapacityError(f"FCI oracle limited to {FCI_MAX_QUBITS} qubits, got {n}")
    basis = sector_basis(n, n_electrons, int(round(2 * sz)))
    if basis.size == 0:
        raise ContractViolation("empty particle-number sector")
    mat = H.sector_matrix(basis)
    if basis.size <= DENSE_LIMIT:
        w, v = scipy.linalg.eigh(mat.toarray())
        energy, vec = float(w[0]), v[:, 0]
    else:
        w, v = scipy.sparse.linalg.eigsh(mat, k=1, which="SA", tol=1e-12)
        energy, vec = float(w[0]), v[:, 0]
    residual = float(np.linalg.norm(mat @ vec - energy * vec))
    full = np.zeros(1 << n, dtype=complex)
    full[basis] = vec
    return FciResult(energy, full, basis, residual)


# ------------------------------------------------------------------- ADAPT


@dataclasses.dataclass
class AdaptReport:
    selected: list[Excitation]
    gradient_norms: list[float]
    energies: list[float]
    final_energy: float
    final_params: np.ndarray
    pool_size: int
    converged: bool
    repeats: list[int] = dataclasses.field(default_factory=list)

    @property
    def n_operators(self) -> int:
        return len(self.selected)

    def to_dict(self) -> dict:
        return {
            "pool_size": self.pool_size,
            "n_operators": self.n_operators,
            "selected": [str(e) for e in self.selected],
            "gradient_norms": self.gradient_norms,
            "energies": self.energies,
            "final_energy": self.final_energy,
            "converged": self.converged,
            "repeats": self.repeats,
        }


def pool_gradients(state: np.ndarray, H: PauliSum, generators: Sequence[PauliSum]) -> np.ndarray:
    """dE/dtheta at theta = 0 for each generator appended after ``state``: 2 Re <H psi|G psi>."""
    hpsi = apply_observable(state, H)
    out = np.empty(len(generators))
    for k, gen in enumerate(generators):
        total = 0.0
        for term in gen:
            total += np.vdot(hpsi, apply_pauli(state, term)).real
        out[k] = 2.0 * total
    return out


def adapt_vqe(
    pool: Sequence[Excitation],
    H: PauliSum,
    state0: np.ndarray,
    epsilon: float = 1e-2,
    max_rounds: int = 200,
    options: VqeOptions = VqeOptions(),
    tie_tol: float = 1e-10,
) -> AdaptReport:
    """Grow the ansatz one pool operator per round by largest energy gradient.

    Stops when the Euclidean norm of the pool gradient vector drops below
    ``epsilon``; the norm does not change when zero-gradient operators are
    added to the pool. Parameters are warm-started; a new one starts at 0.
    """
    if epsilon <= 0:
        raise ContractViolation("epsilon must be positive")
    n_qubits = int(state0.size).bit_length() - 1
    generators = [jw_map(generator(exc), n_qubits) for exc in pool]
    selected: list[Excitation] = []
    params = np.zeros(0)
    norms: list[float] = []
    energies = [expectation(state0, H)]
    repeats: list[int] = []
    converged = False
    for _ in range(max_rounds):
        circuit = build_ansatz(selected, n_qubits)
        psi = apply_circuit(params, circuit, state0)
        grads = pool_gradients(psi, H, generators) if generators else np.zeros(0)
        norm = float(np.linalg.norm(grads))
        norms.append(norm)
        if norm < epsilon:
            converged = True
            break
        mags = np.abs(grads)
        best = int(np.flatnonzero(mags >= mags.max() - tie_tol)[0])
        if pool[best] in selected:
            repeats.append(len(selected))
        selected.append(pool[best])
        circuit = build_ansatz(selected, n_qubits)
        report = vqe_minimize(circuit, H, state0, options, x0=np.append(params, 0.0))
        params = report.final_params
        energies.append(report.final_energy)
        log.info("adapt round %d: +%s gnorm=%.3e E=%.8f", len(selected), pool[best], norm, report.final_energy)
    return AdaptReport(selected, norms, energies, energies[-1], params, len(pool), converged, repeats)


# ----------------------------------------------------------------- scanning


@dataclasses.dataclass
class ScanRow:
    label: str
    energy: float
    n_parameters: int = 0
    error: str = ""


def pes_scan(paths: Sequence, method: str = "vqe", filtered: bool = True,
             options: VqeOptions = VqeOptions()) -> list[ScanRow]:
    """Independent solve per fixture; a failing fixture is recorded, not fatal."""
    if method not in ("vqe", "fci"):
        raise ContractViolation(f"unknown scan method {method!r}")
    rows = []
    for path in paths:
        label = Path(path).name.removesuffix(".fcidump")
        try:
            prob = Problem.from_fcidump(path)
            if method == "fci":
                res = fci_solve(prob.hamiltonian, prob.table.n_electrons)
                rows.append(ScanRow(label, res.energy))
            else:
                circ = prob.circuit(filtered)
                rep = vqe_minimize(circ, prob.hamiltonian, prob.state0, options)
                rows.append(ScanRow(label, rep.final_energy, circ.n_parameters))
        except (SymuccError, OSError) as exc:
            rows.append(ScanRow(label, math.nan, 0, f"{type(exc).__name__}: {exc}"))
    return rows


# ------------------------------------------------------------ shot-based VQE


@dataclasses.dataclass
class SampledVqeResult:
    params: np.ndarray
    estimated_energy: float  # shot estimate at the final parameters
    exact_energy: float  # noiseless energy at the same parameters
    n_evaluations: int


def vqe_sampled(
    circuit: AnsatzCircuit,
    H: PauliSum,
    state0: np.ndarray,
    shots: int,
    seed: int = 0,
    max_iter: int = 400,
    rhobeg: float = 0.1,
) -> SampledVqeResult:
    """Gradient-free (COBYLA) VQE on shot-sampled energies.

    Each energy call draws ``shots`` outcomes per Hamiltonian term from the
    exact output distribution, using one Philox stream per run.
    """
    rng = make_rng(seed, shots)
    evals = 0

    def fun(theta):
        nonlocal evals
        evals += 1
        return sampled_energy(apply_circuit(theta, circuit, state0), H, shots, rng)

    x0 = np.zeros(circuit.n_parameters)
    if circuit.n_parameters:
        res = scipy.optimize.minimize(fun, x0, method="COBYLA",
                                      options={"maxiter": max_iter, "rhobeg": rhobeg, "tol": 1e-6})
        x = res.x
    else:
        x = x0
    psi = apply_circuit(x, circuit, state0)
    return SampledVqeResult(x, sampled_energy(psi, H, shots, rng), expectation(psi, H), evals)


def reference_energies(problem: Problem) -> dict[str, float]:
    out = {"e_hf": hf_energy(problem.table)}
    if problem.n_qubits <= FCI_MAX_QUBITS:
        out["e_fci"] = fci_solve(problem.hamiltonian, problem.table.n_electrons).energy
    return out


@dataclasses.dataclass
class ShotStudy:
    """Final energies of shot-sampled VQE runs, arrays shaped (len(shots), n_seeds).

    ``estimated`` holds the shot estimate at the final parameters, ``exact``
    the noiseless energy of the same state.
    """

    shots: list[int]
    estimated: dict[str, np.ndarray]
    exact: dict[str, np.ndarray]

    def fluctuation(self, label: str, kind: str = "exact") -> float:
        """Seed-to-seed standard deviation, averaged over shot counts."""
        data = self.exact if kind == "exact" else self.estimated
        return float(np.mean(np.std(data[label], axis=1, ddof=1)))

    def mean_energy(self, label: str, kind: str = "exact") -> np.ndarray:
        data = self.exact if kind == "exact" else self.estimated
        return data[label].mean(axis=1)


def shot_study(circuits: dict[str, AnsatzCircuit], H: PauliSum, state0: np.ndarray,
               shots: Sequence[int], seeds: Sequence[int], max_iter: int = 400) -> ShotStudy:
    """Shot-sampled VQE for several ansatzes over a grid of shot counts and seeds."""
    estimated, exact = {}, {}
    for label, circ in circuits.items():
        est = np.empty((len(shots), len(seeds)))
        ex = np.empty_like(est)
        for i, n in enumerate(shots):
            for j, seed in enumerate(seeds):
                res = vqe_sampled(circ, H, state0, n, seed, max_iter)
                est[i, j], ex[i, j] = res.estimated_energy, res.exact_energy
        estimated[label], exact[label] = est, ex
    return ShotStudy(list(shots), estimated, exact)
