"""Quantum Fisher information of stabilizer code states under local Pauli Hamiltonians."""

from .codes import CssCode, StabilizerCode, css_from_matrices, distance_bruteforce, is_nondegenerate
from .codes import stabilizer_state_from_code
from .hamiltonian import LocalityProfile, PauliHamiltonian, validate_k_local
from .pauli import PauliOperator, commutes, format_pauli, mul, parse_pauli, support, weight
from .qfi import QfiReport, correlation, qfi_mixed_dense, qfi_pure_dense, qfi_stabilizer
from .state import StabilizerState

__all__ = [
    "CssCode",
    "LocalityProfile",
    "PauliHamiltonian",
    "PauliOperator",
    "QfiReport",
    "StabilizerCode",
    "StabilizerState",
    "commutes",
    "correlation",
    "css_from_matrices",
    "distance_bruteforce",
    "format_pauli",
    "is_nondegenerate",
    "mul",
    "parse_pauli",
    "qfi_mixed_dense",
    "qfi_pure_dense",
    "qfi_stabilizer",
    "stabilizer_state_from_code",
    "support",
    "validate_k_local",
    "weight",
]
