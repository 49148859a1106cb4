import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from symucc.circuit import build_ansatz
from symucc.errors import CapacityError, ContractViolation, DegenerateRotation
from symucc.fermionics import Excitation, generator
from symucc.integrals import hf_energy
from symucc.pauli import PauliSum, PauliTerm, jw_map
from symucc.simulator import (
    allocate,
    apply_circuit,
    apply_pauli,
    apply_pauli_rotation,
    basis_state,
    energy,
    energy_and_gradient,
    expectation,
    generator_gradient,
)

import oracles


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 31), st.integers(0, 31), st.floats(-3, 3), st.integers(0, 2**31))
def test_rotation_matches_expm(x, z, angle, seed):
    if x == 0 and z == 0:
        return
    psi = random_state(5, seed)
    want = scipy.linalg.expm(1j * angle * oracles.pauli_matrix(x, z, 5)) @ psi
    np.testing.assert_allclose(apply_pauli_rotation(psi, PauliTerm(x, z), angle), want, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 2**31))
def test_apply_pauli_matches_dense(x, z, seed):
    psi = random_state(4, seed)
    np.testing.assert_allclose(apply_pauli(psi, PauliTerm(x, z, -0.5j)), -0.5j * oracles.pauli_matrix(x, z, 4) @ psi,
                               atol=1e-14)


def test_identity_rotation_rejected():
    with pytest.raises(DegenerateRotation):
        apply_pauli_rotation(basis_state(2, [0]), PauliTerm(0, 0), 0.3)


@pytest.mark.parametrize("name", ["h2", "h4"])
def test_circuit_matches_trotter_oracle(problem, name):
    prob = problem(name)
    circ = prob.circuit(filtered=False)
    theta = np.random.default_rng(3).uniform(-1, 1, circ.n_parameters)
    want = oracles.trotter_unitary(circ, theta) @ prob.state0
    np.testing.assert_allclose(apply_circuit(theta, circ, prob.state0), want, atol=1e-12)


@pytest.mark.parametrize("name", ["h4", "lih"])
def test_norm_and_particle_number_conserved(problem, name):
    prob = problem(name)
    circ = prob.circuit(filtered=False)
    theta = np.random.default_rng(7).uniform(-2, 2, circ.n_parameters)
    psi = apply_circuit(theta, circ, prob.state0)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-10)
    counts = np.array([bin(i).count("1") for i in range(psi.size)])
    weights = np.abs(psi) ** 2
    assert weights[counts != prob.table.n_electrons].sum() < 1e-20
    alpha = np.array([bin(i & 0x5555555).count("1") for i in range(psi.size)])
    assert weights[2 * alpha != counts].sum() < 1e-20


def determinant_irreps(table, n_states):
    labels = np.zeros(n_states, dtype=int)
    for q in range(table.n_qubits):
        occupied = (np.arange(n_states) >> q) & 1
        labels ^= occupied * (table.orbsym[q // 2] - 1)
    return labels


@pytest.mark.parametrize("name", ["lih", "beh2"])
def test_filtered_state_stays_in_reference_irrep(problem, name):
    prob = problem(name)
    circ = prob.circuit(filtered=True)
    theta = np.random.default_rng(11).uniform(-1, 1, circ.n_parameters)
    psi = apply_circuit(theta, circ, prob.state0)
    labels = determinant_irreps(prob.table, psi.size)
    assert np.linalg.norm(psi[labels != 0]) < 1e-10


def test_unfiltered_state_leaves_sector(problem):
    # sanity check that the purity test can fail
    prob = problem("lih")
    circ = prob.circuit(filtered=False)
    theta = np.random.default_rng(11).uniform(-1, 1, circ.n_parameters)
    psi = apply_circuit(theta, circ, prob.state0)
    assert np.linalg.norm(psi[determinant_irreps(prob.table, psi.size) != 0]) > 1e-3


def test_gradient_matches_finite_differences(problem):
    prob = problem("h4")
    circ = prob.circuit(filtered=False)
    theta = np.random.default_rng(5).uniform(-0.5, 0.5, circ.n_parameters)
    e, g = energy_and_gradient(theta, circ, prob.hamiltonian, prob.state0)
    assert e == pytest.approx(energy(theta, circ, prob.hamiltonian, prob.state0), abs=1e-12)
    h = 1e-5
    fd = np.empty_like(g)
    for k in range(len(theta)):
        step = np.zeros_like(theta)
        step[k] = h
        fd[k] = (energy(theta + step, circ, prob.hamiltonian, prob.state0)
                 - energy(theta - step, circ, prob.hamiltonian, prob.state0)) / (2 * h)
    assert np.linalg.norm(g - fd) <= 1e-6 * np.linalg.norm(g)


def test_forbidden_gradients_vanish(problem):
    prob = problem("beh2")
    kept = set(prob.filtered_pool())
    circ = prob.circuit(filtered=True)
    theta = np.random.default_rng(2).uniform(-0.3, 0.3, circ.n_parameters)
    for state in (prob.state0, apply_circuit(theta, circ, prob.state0)):
        hpsi = prob.hamiltonian.to_sparse() @ state
        for exc in prob.pool:
            if exc in kept:
                continue
            gen = jw_map(generator(exc), prob.n_qubits)
            assert abs(generator_gradient(state, prob.hamiltonian, gen, hpsi)) < 1e-10


def test_generator_gradient_matches_derivative(problem):
    prob = problem("h4")
    exc = prob.pool[-1]
    gen = jw_map(generator(exc), prob.n_qubits)
    g = generator_gradient(prob.state0, prob.hamiltonian, gen)
    _, grad = energy_and_gradient([0.0], build_ansatz([exc], prob.table), prob.hamiltonian, prob.state0)
    assert g == pytest.approx(grad[0], abs=1e-12)


@pytest.mark.parametrize("name", ["h2", "h4", "lih", "beh2"])
def test_reference_energy_is_hf(problem, name):
    prob = problem(name)
    assert expectation(prob.state0, prob.hamiltonian) == pytest.approx(hf_energy(prob.table), abs=1e-10)
    circ = prob.circuit()
    assert energy(np.zeros(circ.n_parameters), circ, prob.hamiltonian, prob.state0) == pytest.approx(
        hf_energy(prob.table), abs=1e-10)


def test_contract_violations(problem):
    prob = problem("h2")
    circ = prob.circuit()
    with pytest.raises(ContractViolation):
        energy_and_gradient(np.zeros(circ.n_parameters + 1), circ, prob.hamiltonian, prob.state0)
    with pytest.raises(ContractViolation):
        expectation(prob.state0, PauliSum({(1, 0): 1j}, 4))
    with pytest.raises(ContractViolation):
        energy_and_gradient(np.zeros(circ.n_parameters), circ, prob.hamiltonian, basis_state(3, [0]))


def test_capacity():
    with pytest.raises(CapacityError):
        allocate(27)
    with pytest.raises(CapacityError):
        allocate(5, cap=4)
    assert allocate(3).shape == (8,)


def test_single_rotation_closed_form():
    # exp(i t Y0 X1) on |01> rotates into |10>
    psi = basis_state(2, [0])
    out = apply_pauli_rotation(psi, PauliTerm.from_label("Y0 X1"), 0.4)
    want = scipy.linalg.expm(0.4j * oracles.pauli_matrix(0b11, 0b01, 2)) @ psi
    np.testing.assert_allclose(out, want, atol=1e-14)
    assert abs(out[1]) == pytest.approx(math.cos(0.4))
    assert abs(out[2]) == pytest.approx(math.sin(0.4))


def test_h2_single_double_excitation():
    e = Excitation(((0, 1), (0, 1)))
    circ = build_ansatz([e], 4)
    psi = apply_circuit([0.3], circ, basis_state(4, [0, 1]))
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    assert abs(psi[0b0011]) == pytest.approx(math.cos(0.3), abs=1e-12)
    assert abs(psi[0b1100]) == pytest.approx(math.sin(0.3), abs=1e-12)
