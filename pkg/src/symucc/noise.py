"""Depolarizing-noise trajectories, finite-shot estimation and zero-noise extrapolation.

Noise acts on the gate-level decomposition of every rotation: after each gate
a uniformly random non-identity Pauli on the gate's support is inserted with
probability p1 (one-qubit gates) or p2 (CNOT). Rotations that draw no error
are applied with the fast cos/sin update, since their gate sequence multiplies
out to the same unitary.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

import numpy as np

from .circuit import AnsatzCircuit, Gate, decompose_rotation
from .errors import ContractViolation
from .pauli import PauliSum, PauliTerm, parity_sign
from .simulator import _I_POW, _indices, apply_observable, apply_pauli, check_observable, kernel_for


@dataclasses.dataclass(frozen=True)
class NoiseSpec:
    p1: float = 0.0
    p2: float = 0.0
    shots: int = 0
    trajectories: int = 1
    fold_factors: tuple[int, ...] = (1, 3, 5)

    def __post_init__(self):
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ContractViolation(f"{name}={p} is not a probability")
        if self.shots < 0 or self.trajectories < 1:
            raise ContractViolation("need shots >= 0 and trajectories >= 1")
        f = tuple(self.fold_factors)
        if any(k < 1 or k % 2 == 0 for k in f) or list(f) != sorted(set(f)):
            raise ContractViolation(f"fold factors must be odd, positive and ascending, got {f}")

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based (Philox) generator; ``stream`` selects an independent substream."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


# ------------------------------------------------------------- gate kernels

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _rx(phi: float) -> np.ndarray:
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _rz(phi: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])


def apply_one_qubit(state: np.ndarray, q: int, u: np.ndarray) -> np.ndarray:
    view = state.reshape(-1, 2, 1 << q)
    return np.einsum("ab,ibj->iaj", u, view).reshape(-1)


def apply_cx(state: np.ndarray, control: int, target: int) -> np.ndarray:
    idx = _indices(int(state.size).bit_length() - 1)
    src = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
    out = state.copy()
    out[src], out[src | (1 << target)] = state[src | (1 << target)], state[src]
    return out


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    if gate.name == "h":
        return apply_one_qubit(state, gate.qubits[0], _H)
    if gate.name == "rx":
        return apply_one_qubit(state, gate.qubits[0], _rx(gate.angle))
    if gate.name == "rz":
        return apply_one_qubit(state, gate.qubits[0], _rz(gate.angle))
    if gate.name == "cx":
        return apply_cx(state, *gate.qubits)
    raise ValueError(f"unknown gate {gate.name!r}")


def random_pauli(rng: np.random.Generator, qubits: Sequence[int]) -> PauliTerm:
    """Uniform non-identity Pauli on ``qubits``."""
    code = int(rng.integers(1, 4 ** len(qubits)))
    x = z = 0
    for q in qubits:
        c, code = code % 4, code // 4
        # 1 = X, 2 = Y, 3 = Z
        if c in (1, 2):
            x |= 1 << q
        if c in (2, 3):
            z |= 1 << q
    return PauliTerm(x, z, 1.0)


# ---------------------------------------------------------------- folding


def folded_gates(pauli: PauliTerm, angle: float, factor: int) -> list[Gate]:
    """Gates of R (R^dagger R)^((factor - 1) / 2) for R = exp(i angle P)."""
    forward = decompose_rotation(pauli, angle)
    backward = decompose_rotation(pauli, -angle)
    return forward + (backward + forward) * ((factor - 1) // 2)


def _gate_probs(pauli: PauliTerm, factor: int, noise: NoiseSpec) -> np.ndarray:
    gates = folded_gates(pauli, 0.0, factor)
    return np.array([noise.p2 if g.name == "cx" else noise.p1 for g in gates])


# ------------------------------------------------------------ trajectories


def run_trajectory(params, circuit: AnsatzCircuit, state0: np.ndarray, noise: NoiseSpec,
                   rng: np.random.Generator, factor: int = 1, _probs=None) -> np.ndarray:
    kernel = kernel_for(circuit)
    angles = kernel.angles(params)
    if _probs is None:
        _probs = [_gate_probs(r.pauli, factor, noise) for r in circuit.rotations]
    state = np.array(state0, dtype=complex, copy=True)
    noisy = not noise.is_noiseless
    for rot, op, a, probs in zip(circuit.rotations, kernel.ops, angles, _probs):
        hits = rng.random(len(probs)) < probs if noisy else None
        if hits is None or not hits.any():
            if a == 0.0:
                continue
            perm, sign, phase, _, _ = op
            ps = kernel._p(state, perm, sign, phase)
            state *= math.cos(a)
            state += (1j * math.sin(a)) * ps
            continue
        for gate, hit in zip(folded_gates(rot.pauli, a, factor), hits):
            state = apply_gate(state, gate)
            if hit:
                state = apply_pauli(state, random_pauli(rng, gate.qubits))
    return state


def pauli_expectations(state: np.ndarray, observable: PauliSum):
    """Per-term <P> (real parts) in the iteration order of ``observable``."""
    idx = _indices(int(state.size).bit_length() - 1)
    keys, coeffs, values = [], [], []
    by_x: dict[int, list] = {}
    for term in observable:
        by_x.setdefault(term.x_mask, []).append(term)
    for x, terms in by_x.items():
        perm = idx ^ x
        v = state.conj() * state[perm]
        for t in terms:
            keys.append(t.key)
            coeffs.append(t.coefficient.real)
            values.append((np.sum(v * parity_sign(perm, t.z_mask)) * _I_POW[(x & t.z_mask).bit_count() % 4]).real)
    return keys, np.array(coeffs), np.array(values)


def sampled_energy(state: np.ndarray, observable: PauliSum, shots: int, rng: np.random.Generator) -> float:
    """Energy estimated from ``shots`` single-shot +-1 outcomes per non-identity term."""
    keys, coeffs, values = pauli_expectations(state, observable)
    ident = np.array([k == (0, 0) for k in keys])
    energy = float(coeffs[ident].sum())
    c, v = coeffs[~ident], np.clip(values[~ident], -1.0, 1.0)
    if shots == 0:
        return energy + float(c @ v)
    ups = rng.binomial(shots, (1.0 + v) / 2.0)
    return energy + float(c @ (2.0 * ups / shots - 1.0))


def noisy_energy(params, circuit: AnsatzCircuit, H: PauliSum, state0: np.ndarray,
                 noise: NoiseSpec, seed: int = 0, factor: int = 1) -> tuple[float, float]:
    """Mean energy and its standard error over noise trajectories.

    Without gate noise or shots every trajectory is identical, so a single one
    is run and the error is 0.
    """
    check_observable(H)
    deterministic = noise.is_noiseless and noise.shots == 0
    n_traj = 1 if deterministic else noise.trajectories
    probs = [_gate_probs(r.pauli, factor, noise) for r in circuit.rotations]
    energies = np.empty(n_traj)
    for t in range(n_traj):
        rng = make_rng(seed, t)
        psi = run_trajectory(params, circuit, state0, noise, rng, factor, probs)
        if noise.shots == 0:
            energies[t] = float(np.vdot(psi, apply_observable(psi, H)).real)
        else:
            energies[t] = sampled_energy(psi, H, noise.shots, rng)
    if n_traj == 1:
        return float(energies[0]), 0.0
    return float(energies.mean()), float(energies.std(ddof=1) / math.sqrt(n_traj))


def zne_extrapolate(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares line through (fold factor, energy), evaluated at factor 0."""
    factors = sorted({float(f) for f, _ in points})
    if len(factors) < 2:
        raise ContractViolation("zero-noise extrapolation needs at least 2 distinct fold factors")
    x = np.array([f for f, _ in points], dtype=float)
    y = np.array([e for _, e in points], dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    return float(intercept)


def zne_energy(params, circuit, H, state0, noise: NoiseSpec, seed: int = 0):
    """Folded noisy energies for each factor and their extrapolation."""
    points = []
    for k, f in enumerate(noise.fold_factors):
        mean, _ = noisy_energy(params, circuit, H, state0, noise, seed=seed + 1000 * k, factor=f)
        points.append((f, mean))
    return zne_extrapolate(points), points
