"""Phase-tracked Pauli strings as bit-mask pairs and the Jordan-Wigner map.

Qubit ``q`` of a string carries X if only bit ``q`` of ``x_mask`` is set, Z if
only the z bit is set, Y if both are set. Written as an operator,

    P(x, z) = i^{|x & z|} X^x Z^z,

so products reduce to XOR of masks plus a power of i.
"""

from __future__ import annotations

import dataclasses
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

PRUNE_TOL = 1e-12


def _popcount(v: int) -> int:
    return v.bit_count()


_SIGNS = np.array([1.0, -1.0])


def parity_sign(values: np.ndarray, mask: int) -> np.ndarray:
    """(-1)^{popcount(v & mask)} as a float array."""
    return _SIGNS[np.bitwise_count(values & mask) & 1]


def mul_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent k (mod 4) with P(x1,z1) P(x2,z2) = i^k P(x1^x2, z1^z2)."""
    x3, z3 = x1 ^ x2, z1 ^ z2
    return (_popcount(x1 & z1) + _popcount(x2 & z2) - _popcount(x3 & z3) + 2 * _popcount(z1 & x2)) % 4


_I_POW = (1, 1j, -1, -1j)


@dataclasses.dataclass(frozen=True)
class PauliTerm:
    x_mask: int
    z_mask: int
    coefficient: complex = 1.0

    @property
    def key(self) -> tuple[int, int]:
        return self.x_mask, self.z_mask

    @property
    def weight(self) -> int:
        return _popcount(self.x_mask | self.z_mask)

    @property
    def support(self) -> list[int]:
        m, q, out = self.x_mask | self.z_mask, 0, []
        while m:
            if m & 1:
                out.append(q)
            m >>= 1
            q += 1
        return out

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def __mul__(self, other):
        if isinstance(other, PauliTerm):
            return pauli_mul(self, other)
        return PauliTerm(self.x_mask, self.z_mask, self.coefficient * other)

    def __rmul__(self, other):
        return PauliTerm(self.x_mask, self.z_mask, self.coefficient * other)

    def commutes(self, other: "PauliTerm") -> bool:
        return (_popcount(self.x_mask & other.z_mask) + _popcount(self.z_mask & other.x_mask)) % 2 == 0

    def label(self) -> str:
        """Sparse label such as ``'X0 Z1 Y3'``; ``'I'`` for the identity."""
        chars = []
        for q in self.support:
            bx, bz = (self.x_mask >> q) & 1, (self.z_mask >> q) & 1
            chars.append(("Y" if bz else "X") if bx else "Z")
            chars[-1] += str(q)
        return " ".join(chars) if chars else "I"

    @classmethod
    def from_label(cls, label: str, coefficient: complex = 1.0) -> "PauliTerm":
        """Parse ``'X0 Z1 Y3'`` (or ``'I'``)."""
        x = z = 0
        for tok in label.split():
            if tok.upper() == "I":
                continue
            op, q = tok[0].upper(), int(tok[1:])
            if op in "XY":
                x |= 1 << q
            if op in "ZY":
                z |= 1 << q
        return cls(x, z, coefficient)

    def to_matrix(self, n_qubits: int) -> np.ndarray:
        """Dense matrix, qubit q = bit q of the basis index."""
        dim = 1 << n_qubits
        idx = np.arange(dim)
        cols = idx
        rows = idx ^ self.x_mask
        # P|j> = i^{|x&z|} (-1)^{|z & j|} |j ^ x>
        sign = parity_sign(idx, self.z_mask)
        out = np.zeros((dim, dim), dtype=complex)
        out[rows, cols] = self.coefficient * _I_POW[_popcount(self.x_mask & self.z_mask) % 4] * sign
        return out


def pauli_mul(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    k = mul_phase(a.x_mask, a.z_mask, b.x_mask, b.z_mask)
    return PauliTerm(a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask, a.coefficient * b.coefficient * _I_POW[k])


class PauliSum:
    """Linear combination of Pauli strings, keyed by ``(x_mask, z_mask)``.

    Values are immutable once built; arithmetic returns new sums.
    """

    def __init__(self, terms: Mapping[tuple[int, int], complex] | Iterable[PauliTerm] = (), n_qubits: int = 0, tol: float = PRUNE_TOL):
        acc: dict[tuple[int, int], complex] = {}
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = ((t.key, t.coefficient) for t in terms)
        for key, c in items:
            acc[key] = acc.get(key, 0.0) + complex(c)
        self._terms = {k: v for k, v in acc.items() if abs(v) > tol}
        top = max((x | z for x, z in self._terms), default=0).bit_length()
        self.n_qubits = max(n_qubits, top)

    @property
    def terms(self) -> Mapping[tuple[int, int], complex]:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        for (x, z), c in sorted(self._terms.items()):
            yield PauliTerm(x, z, c)

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other: "PauliSum") -> "PauliSum":
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, 0.0) + v
        return PauliSum(acc, max(self.n_qubits, other.n_qubits))

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other * -1.0

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            acc: dict = {}
            for (x1, z1), c1 in self._terms.items():
                for (x2, z2), c2 in other._terms.items():
                    key = (x1 ^ x2, z1 ^ z2)
                    acc[key] = acc.get(key, 0.0) + c1 * c2 * _I_POW[mul_phase(x1, z1, x2, z2)]
            return PauliSum(acc, max(self.n_qubits, other.n_qubits))
        return PauliSum({k: v * other for k, v in self._terms.items()}, self.n_qubits)

    __rmul__ = __mul__

    def adjoint(self) -> "PauliSum":
        return PauliSum({k: v.conjugate() for k, v in self._terms.items()}, self.n_qubits)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def is_anti_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(c.real) <= tol for c in self._terms.values())

    def identity_coefficient(self) -> complex:
        return self._terms.get((0, 0), 0.0)

    def dump(self) -> str:
        """One line per term, ``+c X0 Z1 ...``, sorted by mask for stable diffs."""
        lines = []
        for term in self:
            c = term.coefficient
            if abs(c.imag) <= 1e-15:
                num = f"{c.real:+.12e}"
            else:
                num = f"({c.real:+.12e}{c.imag:+.12e}j)"
            lines.append(f"{num} {term.label()}")
        return "\n".join(lines)

    def to_matrix(self, n_qubits: int | None = None) -> np.ndarray:
        n = self.n_qubits if n_qubits is None else n_qubits
        out = np.zeros((1 << n, 1 << n), dtype=complex)
        for term in self:
            out += term.to_matrix(n)
        return out

    @cached_property
    def _groups(self):
        """Terms grouped by x mask: ``[(x, z_masks, coefficients * i^{|x&z|})]``."""
        by_x: dict[int, list] = {}
        for (x, z), c in sorted(self._terms.items()):
            by_x.setdefault(x, []).append((z, c * _I_POW[_popcount(x & z) % 4]))
        out = []
        for x, zc in by_x.items():
            zs = np.array([z for z, _ in zc], dtype=np.int64)
            cs = np.array([c for _, c in zc], dtype=complex)
            out.append((x, zs, cs))
        return out

    def _row_values(self, x: int, zs: np.ndarray, cs: np.ndarray, rows: np.ndarray) -> np.ndarray:
        # <k| H_x |k ^ x> = sum_z c_z i^{|x&z|} (-1)^{|z & (k ^ x)|}
        cols = rows ^ x
        vals = np.zeros(len(rows), dtype=complex)
        for z, c in zip(zs.tolist(), cs.tolist()):
            vals += c * parity_sign(cols, z)
        return vals

    def _real_if_possible(self, data):
        if np.all(np.abs(data.imag) <= 1e-14):
            return data.real.copy()
        return data

    def to_sparse(self, n_qubits: int | None = None) -> sp.csr_matrix:
        """Sparse matrix on the full 2^n space (H[k, k ^ x] entries)."""
        n = self.n_qubits if n_qubits is None else n_qubits
        dim = 1 << n
        rows = np.arange(dim, dtype=np.int64)
        r_all, c_all, d_all = [], [], []
        for x, zs, cs in self._groups:
            vals = self._row_values(x, zs, cs, rows)
            keep = np.abs(vals) > PRUNE_TOL
            r_all.append(rows[keep])
            c_all.append(rows[keep] ^ x)
            d_all.append(vals[keep])
        if not r_all:
            return sp.csr_matrix((dim, dim))
        data = self._real_if_possible(np.concatenate(d_all))
        return sp.csr_matrix((data, (np.concatenate(r_all), np.concatenate(c_all))), shape=(dim, dim))

    def sector_matrix(self, basis: np.ndarray) -> sp.csr_matrix:
        """Matrix restricted to the span of the computational states ``basis``."""
        basis = np.asarray(basis, dtype=np.int64)
        lookup = np.full(basis.max() + 1 if len(basis) else 1, -1, dtype=np.int64)
        lookup[basis] = np.arange(len(basis))
        r_all, c_all, d_all = [], [], []
        for x, zs, cs in self._groups:
            partner = basis ^ x
            inside = partner < len(lookup)
            inside[inside] = lookup[partner[inside]] >= 0
            if not inside.any():
                continue
            rows = basis[inside]
            vals = self._row_values(x, zs, cs, rows)
            keep = np.abs(vals) > PRUNE_TOL
            r_all.append(lookup[rows[keep]])
            c_all.append(lookup[rows[keep] ^ x])
            d_all.append(vals[keep])
        dim = len(basis)
        if not r_all:
            return sp.csr_matrix((dim, dim))
        data = self._real_if_possible(np.concatenate(d_all))
        return sp.csr_matrix((data, (np.concatenate(r_all), np.concatenate(c_all))), shape=(dim, dim))


# ------------------------------------------------------------ Jordan-Wigner


def jw_ladder(p: int, creation: bool) -> tuple[PauliTerm, PauliTerm]:
    """a+_p = (X_p - iY_p)/2 Z_{<p};  a_p = (X_p + iY_p)/2 Z_{<p}."""
    below = (1 << p) - 1
    bit = 1 << p
    sign = -1 if creation else 1
    return PauliTerm(bit, below, 0.5), PauliTerm(bit, below | bit, 0.5j * sign)


def jw_map(terms: Sequence, n_qubits: int) -> PauliSum:
    """Map a fermionic term list (see :mod:`symucc.fermionics`) to a PauliSum."""
    acc: dict[tuple[int, int], complex] = {}
    cache: dict = {}
    for coeff, ops in terms:
        if not ops:
            acc[(0, 0)] = acc.get((0, 0), 0.0) + coeff
            continue
        key = tuple(ops)
        partial = cache.get(key)
        if partial is None:
            partial = {(0, 0): 1.0 + 0j}
            for p, creation in ops:
                if not 0 <= p < n_qubits:
                    raise IndexError(f"spin orbital {p} outside {n_qubits} qubits")
                nxt: dict = {}
                for lad in jw_ladder(p, creation):
                    for (x, z), c in partial.items():
                        k = mul_phase(x, z, lad.x_mask, lad.z_mask)
                        kk = (x ^ lad.x_mask, z ^ lad.z_mask)
                        nxt[kk] = nxt.get(kk, 0.0) + c * lad.coefficient * _I_POW[k]
                partial = nxt
            cache[key] = partial
        for k, c in partial.items():
            acc[k] = acc.get(k, 0.0) + coeff * c
    return PauliSum(acc, n_qubits)


def qubit_hamiltonian(table) -> PauliSum:
    from .fermionics import hamiltonian_terms

    return jw_map(hamiltonian_terms(table), table.n_qubits)


def number_operator(n_qubits: int) -> PauliSum:
    acc = {(0, 0): n_qubits / 2}
    for q in range(n_qubits):
        acc[(0, 1 << q)] = -0.5
    return PauliSum(acc, n_qubits)


def sz_operator(n_qubits: int) -> PauliSum:
    """S_z = (N_alpha - N_beta)/2 with interleaved spin orbitals."""
    acc = {}
    for q in range(n_qubits):
        acc[(0, 1 << q)] = -0.25 if q % 2 == 0 else 0.25
    return PauliSum(acc, n_qubits)
