import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symucc.circuit import decompose_rotation
from symucc.errors import ContractViolation
from symucc.noise import (
    NoiseSpec,
    apply_gate,
    folded_gates,
    make_rng,
    noisy_energy,
    random_pauli,
    run_trajectory,
    sampled_energy,
    zne_energy,
    zne_extrapolate,
)
from symucc.pauli import PauliTerm
from symucc.simulator import apply_circuit, apply_pauli_rotation, energy, expectation

import oracles


def _random_state(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def test_noiseless_path_is_exact(problem):
    prob = problem("h4")
    circ = prob.circuit()
    theta = np.random.default_rng(0).uniform(-0.5, 0.5, circ.n_parameters)
    e, se = noisy_energy(theta, circ, prob.hamiltonian, prob.state0, NoiseSpec(trajectories=50))
    assert e == energy(theta, circ, prob.hamiltonian, prob.state0)
    assert se == 0.0


def test_seeded_runs_are_deterministic(problem):
    prob = problem("h4")
    circ = prob.circuit()
    theta = np.full(circ.n_parameters, 0.1)
    spec = NoiseSpec(p1=0.01, p2=0.01, shots=100, trajectories=20)
    a = noisy_energy(theta, circ, prob.hamiltonian, prob.state0, spec, seed=4)
    b = noisy_energy(theta, circ, prob.hamiltonian, prob.state0, spec, seed=4)
    c = noisy_energy(theta, circ, prob.hamiltonian, prob.state0, spec, seed=5)
    assert a == b
    assert a != c


def test_rng_streams_are_independent():
    a = make_rng(1, 0).random(4)
    assert np.array_equal(a, make_rng(1, 0).random(4))
    assert not np.array_equal(a, make_rng(1, 1).random(4))
    assert not np.array_equal(a, make_rng(2, 0).random(4))


@pytest.mark.parametrize("label", ["X0 Y1 Z2", "Y0", "Z0 Z2", "X1 X2"])
@pytest.mark.parametrize("factor", [1, 3, 5])
def test_folded_gates_equal_rotation(label, factor):
    p = PauliTerm.from_label(label)
    psi = _random_state(3, 1)
    out = psi
    for g in folded_gates(p, 0.41, factor):
        out = apply_gate(out, g)
    np.testing.assert_allclose(out, apply_pauli_rotation(psi, p, 0.41), atol=1e-12)
    assert len(folded_gates(p, 0.41, factor)) == factor * len(decompose_rotation(p, 0.41))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7), st.floats(-3, 3), st.integers(0, 2**31))
def test_gate_kernels_match_dense(x, z, angle, seed):
    if x == 0 and z == 0:
        return
    psi = _random_state(3, seed)
    for g in decompose_rotation(PauliTerm(x, z), angle):
        np.testing.assert_allclose(apply_gate(psi, g), oracles.gate_matrix(g, 3) @ psi, atol=1e-12)


def test_random_pauli_is_uniform_on_support():
    rng = make_rng(0)
    seen = {}
    for _ in range(3000):
        p = random_pauli(rng, (1, 3))
        assert not p.is_identity()
        assert (p.x_mask | p.z_mask) & ~0b1010 == 0
        seen[p.key] = seen.get(p.key, 0) + 1
    assert len(seen) == 15
    assert min(seen.values()) > 3000 / 15 * 0.7


def density_matrix_energy(prob, circ, theta, p, factor):
    n = prob.n_qubits
    rho = np.outer(prob.state0, prob.state0.conj())
    for rot in circ.rotations:
        for g in folded_gates(rot.pauli, rot.angle(theta), factor):
            u = oracles.gate_matrix(g, n)
            rho = oracles.depolarize(u @ rho @ u.conj().T, g.qubits, p, n)
    return float(np.trace(prob.hamiltonian.to_matrix() @ rho).real)


@pytest.mark.parametrize("factor", [1, 3])
def test_trajectories_match_density_matrix(problem, factor):
    prob = problem("h2")
    circ = prob.circuit()
    theta = np.array([0.3])
    p = 0.02
    want = density_matrix_energy(prob, circ, theta, p, factor)
    spec = NoiseSpec(p1=p, p2=p, trajectories=3000)
    mean, se = noisy_energy(theta, circ, prob.hamiltonian, prob.state0, spec, seed=3, factor=factor)
    assert abs(mean - want) < 4 * se
    assert abs(want - energy(theta, circ, prob.hamiltonian, prob.state0)) > 4 * se


def test_trajectory_preserves_norm(problem):
    prob = problem("h4")
    circ = prob.circuit()
    theta = np.full(circ.n_parameters, 0.2)
    psi = run_trajectory(theta, circ, prob.state0, NoiseSpec(p1=0.2, p2=0.2), make_rng(0), factor=3)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)


def test_sampled_energy(problem):
    prob = problem("h2")
    circ = prob.circuit()
    psi = apply_circuit([0.2], circ, prob.state0)
    exact = expectation(psi, prob.hamiltonian)
    assert sampled_energy(psi, prob.hamiltonian, 0, make_rng(0)) == pytest.approx(exact, abs=1e-12)
    rng = make_rng(1)
    draws = np.array([sampled_energy(psi, prob.hamiltonian, 1000, rng) for _ in range(400)])
    assert abs(draws.mean() - exact) < 4 * draws.std(ddof=1) / np.sqrt(len(draws))
    # fewer shots, larger scatter
    small = np.array([sampled_energy(psi, prob.hamiltonian, 10, rng) for _ in range(400)])
    assert small.std() > 5 * draws.std()


def test_zne_examples():
    assert zne_extrapolate([(1, -1.2), (3, -1.2)]) == pytest.approx(-1.2)
    assert zne_extrapolate([(1, -1.0), (3, -0.9)]) == pytest.approx(-1.05)
    assert zne_extrapolate([(1, -1.0), (3, -0.9), (5, -0.8)]) == pytest.approx(-1.05)


@pytest.mark.parametrize("points", [[], [(1, -1.0)], [(1, -1.0), (1, -0.9)]])
def test_zne_needs_two_factors(points):
    with pytest.raises(ContractViolation):
        zne_extrapolate(points)


def test_zne_noiseless_is_exact(problem):
    prob = problem("h2")
    circ = prob.circuit()
    est, points = zne_energy([0.2], circ, prob.hamiltonian, prob.state0, NoiseSpec())
    exact = energy([0.2], circ, prob.hamiltonian, prob.state0)
    assert [f for f, _ in points] == [1, 3, 5]
    assert all(e == pytest.approx(exact, abs=1e-12) for _, e in points)
    assert est == pytest.approx(exact, abs=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [dict(p1=-0.1), dict(p2=1.5), dict(shots=-1), dict(trajectories=0),
     dict(fold_factors=(1, 2)), dict(fold_factors=(3, 1)), dict(fold_factors=(0, 1))],
)
def test_spec_validation(kwargs):
    with pytest.raises(ContractViolation):
        NoiseSpec(**kwargs)
