"""Dense statevector simulation of Pauli-rotation circuits.

States are complex numpy arrays of length 2**n; qubit q is bit q of the basis
index (qubit 0 is the low bit), and a set bit means the spin orbital is
occupied.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circuit import AnsatzCircuit
from .errors import CapacityError, ContractViolation, DegenerateRotation
from .integrals import ReferenceDeterminant
from .pauli import PauliSum, PauliTerm, parity_sign

MAX_QUBITS = 26
_I_POW = (1, 1j, -1, -1j)


def allocate(n_qubits: int, cap: int | None = None) -> np.ndarray:
    cap = MAX_QUBITS if cap is None else cap
    if n_qubits > cap:
        raise CapacityError(f"{n_qubits} qubits exceeds the statevector cap of {cap}")
    return np.zeros(1 << n_qubits, dtype=complex)


def basis_state(n_qubits: int, occupied: Sequence[int]) -> np.ndarray:
    state = allocate(n_qubits)
    index = 0
    for q in occupied:
        index |= 1 << q
    state[index] = 1.0
    return state


def prepare_reference(n_qubits: int, ref: ReferenceDeterminant) -> np.ndarray:
    return basis_state(n_qubits, ref.spin_orbitals())


def _indices(n_qubits: int) -> np.ndarray:
    return _index_cache(n_qubits)


@lru_cache(maxsize=8)
def _index_cache(n_qubits: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    idx.flags.writeable = False
    return idx


def apply_pauli(state: np.ndarray, pauli: PauliTerm) -> np.ndarray:
    """P|psi> (coefficient included)."""
    x, z = pauli.x_mask, pauli.z_mask
    perm = _indices(int(state.size).bit_length() - 1) ^ x
    out = state[perm]
    if z:
        out *= parity_sign(perm, z)
    return out * (pauli.coefficient * _I_POW[(x & z).bit_count() % 4])


def apply_pauli_rotation(state: np.ndarray, pauli: PauliTerm, angle: float) -> np.ndarray:
    """exp(i angle P)|psi> = cos(angle)|psi> + i sin(angle) P|psi>."""
    if pauli.is_identity():
        raise DegenerateRotation("rotation about the identity is a global phase")
    unit = PauliTerm(pauli.x_mask, pauli.z_mask, 1.0)
    return math.cos(angle) * state + 1j * math.sin(angle) * apply_pauli(state, unit)


def check_observable(observable: PauliSum) -> None:
    if not observable.is_hermitian():
        raise ContractViolation("observable is not Hermitian")


def expectation(state: np.ndarray, observable: PauliSum) -> float:
    check_observable(observable)
    value = np.vdot(state, _matrix(observable, state.size) @ state)
    return float(value.real)


def _matrix(observable: PauliSum, dim: int):
    n = int(dim).bit_length() - 1
    cache = observable.__dict__.setdefault("_sparse_cache", {})
    if n not in cache:
        cache[n] = observable.to_sparse(n)
    return cache[n]


def apply_observable(state: np.ndarray, observable: PauliSum) -> np.ndarray:
    return _matrix(observable, state.size) @ state


# ----------------------------------------------------------- circuit kernel


class CircuitKernel:
    """Precomputed index/sign tables for fast repeated circuit evaluation."""

    def __init__(self, circuit: AnsatzCircuit):
        n = circuit.n_qubits
        allocate(n)
        idx = _indices(n)
        self.circuit = circuit
        self.n_qubits = n
        self._perms: dict[int, np.ndarray] = {}
        self.ops = []
        for rot in circuit.rotations:
            if rot.x_mask == 0 and rot.z_mask == 0:
                raise DegenerateRotation("rotation about the identity is a global phase")
            perm = self._perms.get(rot.x_mask)
            if perm is None:
                perm = self._perms[rot.x_mask] = idx ^ rot.x_mask
            phase = _I_POW[(rot.x_mask & rot.z_mask).bit_count() % 4]
            sign = parity_sign(perm, rot.z_mask).astype(np.int8) if rot.z_mask else None
            self.ops.append((perm, sign, phase, rot.param, rot.coeff))

    @staticmethod
    def _p(state, perm, sign, phase):
        out = state[perm]
        if sign is not None:
            out *= sign
        if phase != 1:
            out *= phase
        return out

    def angles(self, params) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.circuit.n_parameters,):
            raise ContractViolation(
                f"expected {self.circuit.n_parameters} parameters, got shape {params.shape}"
            )
        return np.array([coeff * params[k] for _, _, _, k, coeff in self.ops])

    def apply(self, params, state0: np.ndarray) -> np.ndarray:
        state = np.array(state0, dtype=complex, copy=True)
        for (perm, sign, phase, _, _), a in zip(self.ops, self.angles(params)):
            if a == 0.0:
                continue
            ps = self._p(state, perm, sign, phase)
            state *= math.cos(a)
            state += (1j * math.sin(a)) * ps
        return state

    def energy_and_gradient(self, params, H: PauliSum, state0: np.ndarray):
        angles = self.angles(params)
        psi = self.apply(params, state0)
        Hm = _matrix(H, psi.size)
        lam = Hm @ psi
        energy = float(np.vdot(psi, lam).real)
        grad = np.zeros(self.circuit.n_parameters)
        for (perm, sign, phase, k, coeff), a in zip(reversed(self.ops), angles[::-1]):
            ppsi = self._p(psi, perm, sign, phase)
            # dE/da = 2 Re <lam| i P |psi> = -2 Im <lam|P psi>
            grad[k] += coeff * (-2.0 * np.vdot(lam, ppsi).imag)
            if a != 0.0:
                c, s = math.cos(a), math.sin(a)
                psi *= c
                psi -= (1j * s) * ppsi
                plam = self._p(lam, perm, sign, phase)
                lam *= c
                lam -= (1j * s) * plam
        return energy, grad


_KERNELS: dict[int, CircuitKernel] = {}


def kernel_for(circuit: AnsatzCircuit) -> CircuitKernel:
    key = id(circuit)
    k = _KERNELS.get(key)
    if k is None or k.circuit is not circuit:
        if len(_KERNELS) > 16:
            _KERNELS.clear()
        k = _KERNELS[key] = CircuitKernel(circuit)
    return k


def apply_circuit(params, circuit: AnsatzCircuit, state0: np.ndarray) -> np.ndarray:
    return kernel_for(circuit).apply(params, state0)


def energy(params, circuit: AnsatzCircuit, H: PauliSum, state0: np.ndarray) -> float:
    return expectation(apply_circuit(params, circuit, state0), H)


def energy_and_gradient(params, circuit: AnsatzCircuit, H: PauliSum, state0: np.ndarray):
    """Energy and exact gradient by one forward pass and one reverse sweep."""
    check_observable(H)
    if circuit.n_qubits != int(state0.size).bit_length() - 1:
        raise ContractViolation("state and circuit disagree on the number of qubits")
    return kernel_for(circuit).energy_and_gradient(params, H, state0)


def generator_gradient(state: np.ndarray, H: PauliSum, generator: PauliSum, hpsi: np.ndarray | None = None) -> float:
    """d/dtheta <psi| e^{-theta G} H e^{theta G} |psi> at theta = 0 for anti-Hermitian G.

    Equals 2 Re <H psi | G psi>; the Trotter order of G's strings does not
    matter at theta = 0.
    """
    if hpsi is None:
        hpsi = apply_observable(state, H)
    total = 0.0
    for term in generator:
        total += 2.0 * np.vdot(hpsi, apply_pauli(state, term)).real
    return float(total)
