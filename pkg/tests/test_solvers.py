import math

import numpy as np
import pytest

from symucc import solvers
from symucc.circuit import build_ansatz
from symucc.errors import CapacityError, ContractViolation, OptimizerDiverged
from symucc.integrals import hf_energy
from symucc.pauli import PauliSum
from symucc.solvers import (
    VqeOptions,
    adapt_vqe,
    fci_solve,
    pes_scan,
    sector_basis,
    shot_study,
    vqe_minimize,
    vqe_sampled,
)
from symucc.symmetry import excitation_irrep

import oracles


def test_h2_vqe_is_exact(problem):
    prob = problem("h2")
    rep = vqe_minimize(prob.circuit(), prob.hamiltonian, prob.state0)
    assert rep.converged
    assert rep.n_parameters == 1
    assert abs(rep.final_energy - oracles.fci_energy(prob.table)) < 1e-8


def test_empty_circuit_returns_hf(problem):
    prob = problem("h4")
    rep = vqe_minimize(build_ansatz([], prob.table), prob.hamiltonian, prob.state0)
    assert rep.converged and rep.n_parameters == 0
    assert rep.final_energy == pytest.approx(hf_energy(prob.table), abs=1e-10)


@pytest.mark.parametrize("name", ["h2", "h4", "lih", "hf"])
def test_fci_matches_determinant_oracle(problem, name):
    prob = problem(name)
    res = fci_solve(prob.hamiltonian, prob.table.n_electrons)
    assert res.energy == pytest.approx(oracles.fci_energy(prob.table), abs=1e-9)
    assert res.residual < 1e-8
    assert np.linalg.norm(res.vector) == pytest.approx(1.0)


def test_sparse_fci_path(problem, monkeypatch):
    prob = problem("lih")
    dense = fci_solve(prob.hamiltonian, prob.table.n_electrons).energy
    monkeypatch.setattr(solvers, "DENSE_LIMIT", 10)
    sparse = fci_solve(prob.hamiltonian, prob.table.n_electrons)
    assert sparse.energy == pytest.approx(dense, abs=1e-9)


def test_sector_basis():
    assert sector_basis(14, 6).size == math.comb(7, 3) ** 2 == 1225
    basis = sector_basis(8, 4, 2)
    assert basis.size == math.comb(4, 3) * math.comb(4, 1)
    for i in basis:
        assert bin(int(i) & 0x55).count("1") == 3
        assert bin(int(i) & 0xAA).count("1") == 1
    assert sector_basis(4, 3).size == 0


def test_fci_capacity():
    with pytest.raises(CapacityError):
        fci_solve(PauliSum({(0, 0): 1.0}, 18), 2)


@pytest.mark.parametrize("name", ["h2", "h4", "lih"])
def test_variational_bound_and_monotone_trace(problem, name):
    prob = problem(name)
    e_fci = oracles.fci_energy(prob.table)
    for filtered in (True, False):
        rep = vqe_minimize(prob.circuit(filtered), prob.hamiltonian, prob.state0)
        assert rep.final_energy >= e_fci - 1e-10
        assert rep.final_energy <= hf_energy(prob.table) + 1e-12
        energies = [e for _, e, _ in rep.iterations]
        assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))


def test_vqe_options_checked(problem):
    prob = problem("h2")
    with pytest.raises(ContractViolation):
        vqe_minimize(prob.circuit(), prob.hamiltonian, prob.state0, VqeOptions(tol=0))
    with pytest.raises(ContractViolation):
        vqe_minimize(prob.circuit(), prob.hamiltonian, prob.state0, x0=[0.0, 0.0])


def test_optimizer_diverged(problem, monkeypatch):
    prob = problem("h2")
    calls = []

    def broken(theta, *args):
        calls.append(1)
        return (0.0, np.zeros(1)) if len(calls) == 1 else (math.nan, np.zeros(1))

    monkeypatch.setattr(solvers, "energy_and_gradient", broken)
    with pytest.raises(OptimizerDiverged) as info:
        vqe_minimize(prob.circuit(), prob.hamiltonian, prob.state0, x0=[0.1])
    assert len(info.value.trace) >= 1


def test_vqe_report_dict(problem):
    prob = problem("h2")
    d = vqe_minimize(prob.circuit(), prob.hamiltonian, prob.state0).to_dict()
    assert set(d) >= {"n_parameters", "final_energy", "converged", "iterations", "final_params"}
    assert d["iterations"][0]["k"] == 0


def test_adapt_h4(problem):
    prob = problem("h4")
    e_fci = oracles.fci_energy(prob.table)
    full = adapt_vqe(prob.pool, prob.hamiltonian, prob.state0, epsilon=1e-3)
    kept = adapt_vqe(prob.filtered_pool(), prob.hamiltonian, prob.state0, epsilon=1e-3)
    assert full.converged and kept.converged
    assert full.final_energy >= e_fci - 1e-10
    assert abs(full.final_energy - kept.final_energy) < 1e-6
    assert all(b <= a + 1e-10 for a, b in zip(full.energies, full.energies[1:]))
    assert full.gradient_norms[-1] < 1e-3
    assert all(excitation_irrep(e, prob.table) == 0 for e in full.selected)


def test_adapt_wrong_irrep_pool(problem):
    prob = problem("lih")
    wrong = [e for e in prob.pool if excitation_irrep(e, prob.table) != 0]
    rep = adapt_vqe(wrong, prob.hamiltonian, prob.state0)
    assert rep.n_operators == 0 and rep.converged
    assert rep.final_energy == pytest.approx(hf_energy(prob.table), abs=1e-10)
    assert rep.gradient_norms == [pytest.approx(0.0, abs=1e-10)]


def test_adapt_tie_break_prefers_lowest_index(problem):
    prob = problem("h2")
    exc = prob.filtered_pool()[0]
    rep = adapt_vqe([exc, exc], prob.hamiltonian, prob.state0, max_rounds=1)
    assert rep.selected == [exc]
    assert rep.pool_size == 2


def test_adapt_epsilon_checked(problem):
    prob = problem("h2")
    with pytest.raises(ContractViolation):
        adapt_vqe(prob.pool, prob.hamiltonian, prob.state0, epsilon=0)


def test_pes_scan_records_failures(fixtures_dir, tmp_path):
    bad = tmp_path / "broken.fcidump"
    bad.write_text("&FCI NORB=x &END\n")
    rows = pes_scan([fixtures_dir / "h2.fcidump", bad, tmp_path / "missing.fcidump"], method="fci")
    assert rows[0].label == "h2" and not rows[0].error
    assert rows[1].error.startswith("ParseError") and math.isnan(rows[1].energy)
    assert rows[2].error and math.isnan(rows[2].energy)
    with pytest.raises(ContractViolation):
        pes_scan([], method="dmrg")


def test_pes_scan_vqe(fixtures_dir):
    (row,) = pes_scan([fixtures_dir / "h2.fcidump"], method="vqe")
    (ref,) = pes_scan([fixtures_dir / "h2.fcidump"], method="fci")
    assert row.energy == pytest.approx(ref.energy, abs=1e-8)
    assert row.n_parameters == 1


def test_sampled_vqe_is_seeded(problem):
    prob = problem("h2")
    a = vqe_sampled(prob.circuit(), prob.hamiltonian, prob.state0, shots=256, seed=1, max_iter=40)
    b = vqe_sampled(prob.circuit(), prob.hamiltonian, prob.state0, shots=256, seed=1, max_iter=40)
    assert a.estimated_energy == b.estimated_energy
    np.testing.assert_array_equal(a.params, b.params)
    assert a.exact_energy >= oracles.fci_energy(prob.table) - 1e-10


def test_shot_study_shapes(problem):
    prob = problem("h2")
    study = shot_study({"sym": prob.circuit()}, prob.hamiltonian, prob.state0, [64, 256], [0, 1, 2], max_iter=30)
    assert study.exact["sym"].shape == (2, 3)
    assert study.mean_energy("sym").shape == (2,)
    assert study.fluctuation("sym") >= 0
