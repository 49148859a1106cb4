"""Restricted closed-shell UCCSD excitation pool and second-quantized operators.

Spin orbitals are interleaved: spin-orbital ``2*p + s`` is spatial orbital ``p``
with spin ``s`` (0 = alpha, 1 = beta).

A fermionic term is ``(coefficient, ops)`` where ``ops`` is a tuple of
``(spin_orbital, is_creation)`` read left to right as an operator product.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

from .integrals import IntegralTable

LadderOp = tuple[int, bool]
FermionTerm = tuple[complex, tuple[LadderOp, ...]]
FermionTermList = list[FermionTerm]


@dataclasses.dataclass(frozen=True)
class Excitation:
    """A spin-adapted single or double excitation between spatial orbitals.

    ``pairs`` holds one ``(i, a)`` occupied -> virtual pair for a single and two
    lexicographically ordered pairs for a double; ``((i, a), (i, a))`` is the
    paired double that moves both electrons of ``i`` into ``a``.
    ``parameter_index`` is the position in the enumerated (unfiltered) pool.
    """

    pairs: tuple[tuple[int, int], ...]
    parameter_index: int = dataclasses.field(default=-1, compare=False)

    @property
    def is_single(self) -> bool:
        return len(self.pairs) == 1

    def orbitals(self) -> tuple[int, ...]:
        """Spatial orbitals touched, with multiplicity."""
        return tuple(p for pair in self.pairs for p in pair)

    def __str__(self) -> str:
        if self.is_single:
            (i, a), = self.pairs
            return f"t({i}->{a})"
        (i, a), (j, b) = self.pairs
        return f"t({i}{j}->{a}{b})"


def spin_orbital(p: int, spin: int) -> int:
    return 2 * p + spin


def enumerate_pool(table: IntegralTable) -> list[Excitation]:
    """Singles (i -> a) then doubles over unordered pairs of single pairs.

    With n occupied and m virtual orbitals this yields m*n singles and
    m*n + C(m*n, 2) doubles. A table with no occupied or no virtual orbitals
    gives an empty pool.
    """
    n_occ, n = table.n_occupied, table.n_spatial
    pairs = [(i, a) for i in range(n_occ) for a in range(n_occ, n)]
    pool = [Excitation((p,)) for p in pairs]
    for x in range(len(pairs)):
        for y in range(x, len(pairs)):
            pool.append(Excitation((pairs[x], pairs[y])))
    return [dataclasses.replace(e, parameter_index=k) for k, e in enumerate(pool)]


def hermitian_conjugate(terms: Sequence[FermionTerm]) -> FermionTermList:
    return [
        (complex(c).conjugate(), tuple((p, not create) for p, create in reversed(ops)))
        for c, ops in terms
    ]


def _normal_key(ops: tuple[LadderOp, ...]):
    """Operator identity up to sign: the sets of created and annihilated modes."""
    return (
        frozenset(p for p, c in ops if c),
        frozenset(p for p, c in ops if not c),
    )


def excitation_terms(exc: Excitation) -> FermionTermList:
    """The excitation operator t (without the -t^dagger part)."""
    if exc.is_single:
        (i, a), = exc.pairs
        return [
            (1.0, ((spin_orbital(a, s), True), (spin_orbital(i, s), False))) for s in (0, 1)
        ]
    (i, a), (j, b) = exc.pairs
    terms: FermionTermList = []
    seen = set()
    for s in (0, 1):
        for t in (0, 1):
            ca, cb = spin_orbital(a, s), spin_orbital(b, t)
            ai, aj = spin_orbital(i, s), spin_orbital(j, t)
            if ca == cb or ai == aj:
                continue
            ops = ((ca, True), (cb, True), (aj, False), (ai, False))
            key = _normal_key(ops)
            if key in seen:
                continue
            seen.add(key)
            terms.append((1.0, ops))
    return terms


def generator(exc: Excitation, n_spatial: int | None = None) -> FermionTermList:
    """Anti-Hermitian generator G = t - t^dagger sharing one parameter."""
    t = excitation_terms(exc)
    if n_spatial is not None:
        top = max(p for _, ops in t for p, _ in ops)
        if top >= 2 * n_spatial:
            raise IndexError(f"excitation {exc} needs more than {n_spatial} spatial orbitals")
    return t + [(-c, ops) for c, ops in hermitian_conjugate(t)]


def hamiltonian_terms(table: IntegralTable, tol: float = 0.0) -> FermionTermList:
    """Second-quantized electronic Hamiltonian over spin orbitals.

    H = E_core + sum h_pq a+_p a_q + 1/2 sum (pq|rs) a+_p a+_r a_s a_q, with both
    sums running over spin, the two-electron one over spin pairs (sigma, tau).
    """
    n = table.n_spatial
    terms: FermionTermList = []
    if table.core_energy != 0.0:
        terms.append((table.core_energy, ()))
    h1, eri = table.h1, table.eri
    for p in range(n):
        for q in range(n):
            if abs(h1[p, q]) > tol:
                for s in (0, 1):
                    terms.append((h1[p, q], ((2 * p + s, True), (2 * q + s, False))))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    v = eri[p, q, r, s]
                    if abs(v) <= tol or v == 0.0:
                        continue
                    for sig in (0, 1):
                        for tau in (0, 1):
                            if sig == tau and (p == r or q == s):
                                continue
                            ops = (
                                (2 * p + sig, True),
                                (2 * r + tau, True),
                                (2 * s + tau, False),
                                (2 * q + sig, False),
                            )
                            terms.append((0.5 * v, ops))
    return terms
