"""First-order Trotterized UCC ansatz as a sequence of Pauli rotations.

Each excitation generator G_k = t_k - t_k^dagger maps under Jordan-Wigner to
sum_r i c_r P_r with real c_r, and the ansatz factor exp(theta_k G_k) is
replaced by the ordered product of exp(i c_r theta_k P_r). Inside one
excitation the strings are ordered by (x_mask, z_mask).
"""

from __future__ import annotations

import dataclasses
import json
import math
import warnings
from typing import Sequence

from .errors import ContractViolation, DegenerateRotation
from .fermionics import Excitation, generator
from .integrals import IntegralTable
from .pauli import PauliSum, PauliTerm, jw_map


@dataclasses.dataclass(frozen=True)
class Rotation:
    """exp(i * coeff * theta[param] * P) with P = P(x_mask, z_mask)."""

    x_mask: int
    z_mask: int
    param: int
    coeff: float

    @property
    def pauli(self) -> PauliTerm:
        return PauliTerm(self.x_mask, self.z_mask, 1.0)

    def angle(self, params) -> float:
        return self.coeff * params[self.param]


@dataclasses.dataclass(frozen=True)
class Resources:
    parameters: int = 0
    rotations: int = 0
    rz: int = 0
    cnot: int = 0
    basis: int = 0
    depth: int = 0

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class AnsatzCircuit:
    n_qubits: int
    rotations: tuple[Rotation, ...]
    excitations: tuple[Excitation, ...] = ()

    @property
    def n_parameters(self) -> int:
        return len(self.excitations) if self.excitations else len({r.param for r in self.rotations})

    @property
    def resource(self) -> Resources:
        return resource_report(self)

    def serialize(self) -> str:
        """Canonical JSON text (used for reproducibility checks)."""
        return json.dumps(
            {
                "n_qubits": self.n_qubits,
                "excitations": [[list(p) for p in e.pairs] for e in self.excitations],
                "rotations": [[r.x_mask, r.z_mask, r.param, repr(r.coeff)] for r in self.rotations],
            },
            separators=(",", ":"),
        )

    def generator_sum(self, k: int) -> PauliSum:
        """jw(G_k) reassembled from the rotations of parameter ``k``."""
        return PauliSum({(r.x_mask, r.z_mask): 1j * r.coeff for r in self.rotations if r.param == k}, self.n_qubits)


def excitation_rotations(exc: Excitation, n_qubits: int, param: int) -> list[Rotation]:
    gen = jw_map(generator(exc), n_qubits)
    if not gen.is_anti_hermitian():
        raise ContractViolation(f"generator of {exc} is not anti-Hermitian")
    out = []
    for (x, z), c in sorted(gen.terms.items()):
        if x == 0 and z == 0:
            warnings.warn(f"dropping identity component of {exc} (global phase)")
            continue
        out.append(Rotation(x, z, param, c.imag))
    return out


def build_ansatz(pool: Sequence[Excitation], table: IntegralTable | int) -> AnsatzCircuit:
    """Compile excitations, in pool order, into one Trotter step.

    Parameter k belongs to ``pool[k]``; an empty pool gives the identity circuit.
    """
    n_qubits = table if isinstance(table, int) else table.n_qubits
    rotations: list[Rotation] = []
    for k, exc in enumerate(pool):
        rotations.extend(excitation_rotations(exc, n_qubits, k))
    return AnsatzCircuit(n_qubits=n_qubits, rotations=tuple(rotations), excitations=tuple(pool))


# ----------------------------------------------------------------- gates


@dataclasses.dataclass(frozen=True)
class Gate:
    name: str  # "h", "rx", "rz" or "cx"
    qubits: tuple[int, ...]
    angle: float = 0.0

    def inverse(self) -> "Gate":
        if self.name in ("rx", "rz"):
            return Gate(self.name, self.qubits, -self.angle)
        return self


def decompose_rotation(pauli: PauliTerm, angle: float) -> list[Gate]:
    """Gate sequence (in application order) implementing exp(i angle P).

    Basis change (H for X, Rx(pi/2) for Y), a CNOT ladder collecting the parity
    on the highest qubit of the support, Rz(-2 angle) there with
    Rz(phi) = exp(-i phi Z / 2), then the mirror image.
    """
    if pauli.is_identity():
        raise DegenerateRotation("rotation about the identity is a global phase")
    support = pauli.support
    basis = []
    for q in support:
        if (pauli.x_mask >> q) & 1:
            if (pauli.z_mask >> q) & 1:
                basis.append(Gate("rx", (q,), math.pi / 2))
            else:
                basis.append(Gate("h", (q,)))
    ladder = [Gate("cx", (a, b)) for a, b in zip(support, support[1:])]
    return (
        basis
        + ladder
        + [Gate("rz", (support[-1],), -2.0 * angle)]
        + ladder[::-1]
        + [g.inverse() for g in basis]
    )


def rotation_cost(pauli: PauliTerm) -> Resources:
    w = pauli.weight
    non_z = (pauli.x_mask).bit_count()
    return Resources(
        rotations=1,
        rz=1,
        cnot=2 * (w - 1),
        basis=2 * non_z,
        depth=(2 if non_z else 0) + 2 * (w - 1) + 1,
    )


def resource_report(circuit: AnsatzCircuit) -> Resources:
    rz = cnot = basis = depth = 0
    for rot in circuit.rotations:
        c = rotation_cost(rot.pauli)
        rz += c.rz
        cnot += c.cnot
        basis += c.basis
        depth += c.depth
    return Resources(
        parameters=circuit.n_parameters if circuit.rotations or circuit.excitations else 0,
        rotations=len(circuit.rotations),
        rz=rz,
        cnot=cnot,
        basis=basis,
        depth=depth,
    )


def to_qasm(circuit: AnsatzCircuit, params=None, reference: Sequence[int] = ()) -> str:
    """OpenQASM 2 text for the circuit at ``params`` (all zeros by default).

    ``reference`` lists qubits flipped with X first (the reference determinant).
    """
    if params is None:
        params = [0.0] * circuit.n_parameters
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.n_qubits}];"]
    lines += [f"x q[{q}];" for q in reference]
    for rot in circuit.rotations:
        lines.append(f"// exp(i*{rot.coeff!r}*theta[{rot.param}]*{rot.pauli.label().replace(' ', '')})")
        for g in decompose_rotation(rot.pauli, rot.angle(params)):
            qs = ",".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"{g.name}({g.angle!r}) {qs};" if g.name in ("rx", "rz") else f"{g.name} {qs};")
    return "\n".join(lines) + "\n"
