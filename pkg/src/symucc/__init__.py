"""Point-group symmetry reduction of the UCCSD ansatz for VQE simulations."""

from .circuit import AnsatzCircuit, build_ansatz, decompose_rotation, resource_report
from .errors import (
    CapacityError,
    ContractViolation,
    DegenerateRotation,
    OptimizerDiverged,
    ParseError,
    SymuccError,
    UnsupportedReference,
)
from .fermionics import Excitation, enumerate_pool, generator, hamiltonian_terms
from .integrals import IntegralTable, hf_energy, parse_fcidump, read_fcidump, reference_determinant
from .pauli import PauliSum, PauliTerm, jw_map, pauli_mul, qubit_hamiltonian
from .solvers import Problem, VqeOptions, adapt_vqe, fci_solve, pes_scan, vqe_minimize
from .symmetry import excitation_irrep, filter_pool, irrep_census, irrep_product, point_group

__version__ = "0.1.0"
