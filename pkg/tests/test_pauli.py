import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symucc.fermionics import Excitation, excitation_terms, generator, hermitian_conjugate
from symucc.integrals import IntegralTable, read_fcidump
from symucc.pauli import (
    PauliSum,
    PauliTerm,
    jw_map,
    number_operator,
    pauli_mul,
    qubit_hamiltonian,
)

import oracles


def pauli_terms(n):
    return st.builds(
        PauliTerm,
        st.integers(0, (1 << n) - 1),
        st.integers(0, (1 << n) - 1),
        st.sampled_from([1.0, -1.0, 1j, -0.5j, 0.3]),
    )


def dense(term: PauliTerm, n: int) -> np.ndarray:
    return term.coefficient * oracles.pauli_matrix(term.x_mask, term.z_mask, n)


def test_single_qubit_products():
    x, y, z = PauliTerm.from_label("X0"), PauliTerm.from_label("Y0"), PauliTerm.from_label("Z0")
    p = pauli_mul(x, y)
    assert p.key == z.key and p.coefficient == 1j
    p = pauli_mul(z, z)
    assert p.is_identity() and p.coefficient == 1
    p = pauli_mul(PauliTerm.from_label("X0 Z1"), PauliTerm.from_label("Z0 Z1"))
    assert p.key == y.key and p.coefficient == -1j


@settings(max_examples=200, deadline=None)
@given(pauli_terms(4), pauli_terms(4))
def test_product_matches_dense(a, b):
    np.testing.assert_allclose(dense(pauli_mul(a, b), 4), dense(a, 4) @ dense(b, 4), atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(pauli_terms(6), pauli_terms(6))
def test_commutation_predicate(a, b):
    ma, mb = dense(a, 6), dense(b, 6)
    assert a.commutes(b) == np.allclose(ma @ mb, mb @ ma)


@given(pauli_terms(3))
def test_to_matrix_matches_kron(a):
    np.testing.assert_allclose(a.to_matrix(3), dense(a, 3), atol=1e-14)


def test_label_round_trip():
    t = PauliTerm.from_label("X0 Z1 Y3")
    assert t.label() == "X0 Z1 Y3"
    assert PauliTerm(0, 0, 1).label() == "I"


def test_number_operator_identity():
    got = jw_map([(1.0, ((2, True), (2, False)))], 3)
    assert got == PauliSum({(0, 0): 0.5, (0, 1 << 2): -0.5}, 3)
    assert number_operator(3).to_matrix().trace() == pytest.approx(12)


def test_anticommutators():
    n = 6
    for p in range(n):
        for q in range(n):
            ap = jw_map([(1.0, ((p, False),))], n).to_matrix()
            aq_dag = jw_map([(1.0, ((q, True),))], n).to_matrix()
            anti = ap @ aq_dag + aq_dag @ ap
            np.testing.assert_allclose(anti, np.eye(1 << n) * (p == q), atol=1e-14)
            aq = jw_map([(1.0, ((q, False),))], n).to_matrix()
            np.testing.assert_allclose(ap @ aq + aq @ ap, 0, atol=1e-14)


def test_ladder_matches_kron_oracle():
    for p in range(5):
        np.testing.assert_allclose(jw_map([(1.0, ((p, False),))], 5).to_matrix(), oracles.annihilator(p, 5), atol=1e-14)


def test_index_error():
    with pytest.raises(IndexError):
        jw_map([(1.0, ((4, True), (0, False)))], 4)


def test_single_generator_strings():
    # a = 3, i = 0 (spin orbitals): (i/2)(X_a Y_i - Y_a X_i) Z_1 Z_2 under a+ = (X - iY)/2
    gen = jw_map([(1.0, ((3, True), (0, False))), (-1.0, ((0, True), (3, False)))], 4)
    x = 0b1001
    assert gen == PauliSum({(x, 0b0111): 0.5j, (x, 0b1110): -0.5j}, 4)
    assert gen.is_anti_hermitian()


def test_adjacent_single_has_two_strings():
    gen = jw_map([(1.0, ((1, True), (0, False))), (-1.0, ((0, True), (1, False)))], 2)
    assert len(gen) == 2
    assert all(PauliTerm(x, z).weight == 2 for x, z in gen.terms)


def test_double_generator_eight_strings():
    # one spin realization (all alpha): a+_6 a+_4 a_2 a_0
    t = excitation_terms(Excitation(((0, 2), (1, 3))))[:1]
    assert t[0][1] == ((4, True), (6, True), (2, False), (0, False))
    gen = jw_map(t + [(-c, ops) for c, ops in hermitian_conjugate(t)], 8)
    assert len(gen) == 8
    for x, z in gen.terms:
        assert x == (1 << 0) | (1 << 2) | (1 << 4) | (1 << 6)
    assert gen.is_anti_hermitian()


@pytest.mark.parametrize("pairs", [((0, 2),), ((1, 3),), ((0, 2), (1, 3)), ((0, 3), (0, 3)), ((0, 2), (0, 3)), ((1, 2), (0, 2))])
def test_generator_matches_fermionic_matrix(pairs):
    gen = generator(Excitation(pairs))
    mapped = jw_map(gen, 8)
    assert mapped.is_anti_hermitian()
    assert all(c.real == 0 for c in mapped.terms.values())
    np.testing.assert_allclose(mapped.to_matrix(), oracles.fermion_matrix(gen, 8), atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.integers(0, 3), st.integers(0, 3))
def test_linearity(alpha, beta, p, q):
    a = [(1.0, ((p, True), (q, False)))]
    b = [(1.0, ((q, True), (p, True), (p, False), (q, False)))]
    lhs = jw_map([(alpha * c, o) for c, o in a] + [(beta * c, o) for c, o in b], 4)
    rhs = jw_map(a, 4) * alpha + jw_map(b, 4) * beta
    np.testing.assert_allclose(lhs.to_matrix(), rhs.to_matrix(), atol=1e-12)


def test_h2_hamiltonian(fixtures_dir):
    t = read_fcidump(fixtures_dir / "h2.fcidump")
    h = qubit_hamiltonian(t)
    assert len(h) == 15
    assert h.is_hermitian()
    _, dets = oracles.determinant_hamiltonian(t)
    m = h.to_matrix()
    block = m[np.ix_(dets, dets)]
    assert np.linalg.eigvalsh(block)[0] == pytest.approx(oracles.fci_energy(t), abs=1e-10)


def test_core_only_hamiltonian():
    t = IntegralTable.from_arrays(np.zeros((2, 2)), np.zeros((2,) * 4), 2, core_energy=1.0)
    assert qubit_hamiltonian(t) == PauliSum({(0, 0): 1.0}, 4)


def test_lih_hamiltonian_real(fixtures_dir):
    h = qubit_hamiltonian(read_fcidump(fixtures_dir / "lih.fcidump"))
    assert h.is_hermitian()
    assert all(c.imag == 0 for c in h.terms.values())


def test_sparse_matches_dense(fixtures_dir):
    h = qubit_hamiltonian(read_fcidump(fixtures_dir / "h4.fcidump"))
    ref = sum(dense(PauliTerm(x, z, c), 8) for (x, z), c in h.terms.items())
    np.testing.assert_allclose(h.to_sparse().toarray(), ref, atol=1e-12)


def test_dump_sorted():
    s = PauliSum({(1, 0): 0.5, (0, 1): -0.25}, 2)
    lines = s.dump().splitlines()
    assert len(lines) == 2
    assert s.dump() == PauliSum({(0, 1): -0.25, (1, 0): 0.5}, 2).dump()
