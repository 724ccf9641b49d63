"""Dense statevector tools used as an independent oracle at small n.

Basis index bit ``q`` is the computational value of qubit ``q``. Nothing in
here reads the stabilizer tableau beyond the generator list, so agreement
with the symplectic code paths is a genuine cross-check.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .clifford import Clifford, Gate
from .errors import BudgetExceeded, NotNormalized
from .hamiltonian import PauliHamiltonian
from .pauli import PauliOperator
from .state import StabilizerState

DENSE_MAX_QUBITS = 14

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])
# control on local bit 0, target on local bit 1
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]],
    dtype=complex,
)


def _check_budget(n: int, limit: int = DENSE_MAX_QUBITS) -> None:
    if n > limit:
        raise BudgetExceeded(f"dense simulation of {n} qubits exceeds the {limit}-qubit budget")


def _parity(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values) & 1


def apply_pauli(p: PauliOperator, psi: np.ndarray) -> np.ndarray:
    """``p @ psi`` without forming a matrix."""
    idx = np.arange(psi.shape[0], dtype=np.int64)
    signs = 1 - 2 * _parity(idx & p.z).astype(np.int8)
    out = np.empty_like(psi, dtype=complex)
    out[idx ^ p.x] = (1j**p.phase) * signs * psi
    return out


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    _check_budget(p.n, 12)
    dim = 1 << p.n
    return np.stack([apply_pauli(p, col) for col in np.eye(dim, dtype=complex)], axis=1)


def apply_hamiltonian(h: PauliHamiltonian, psi: np.ndarray) -> np.ndarray:
    out = np.zeros_like(psi, dtype=complex)
    for c, p in h.terms:
        out += c * apply_pauli(p, psi)
    return out


def hamiltonian_matrix(h: PauliHamiltonian) -> np.ndarray:
    _check_budget(h.n, 12)
    dim = 1 << h.n
    return np.stack([apply_hamiltonian(h, col) for col in np.eye(dim, dtype=complex)], axis=1)


def statevector(state: StabilizerState, seed: int = 0) -> np.ndarray:
    """Dense vector of a stabilizer state via ``prod (1 + g)/2`` applied to a random vector.

    The global phase is fixed by making the largest amplitude real positive.
    """
    _check_budget(state.n)
    rng = np.random.default_rng(seed)
    dim = 1 << state.n
    for _ in range(8):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        for g in state.generators:
            v = 0.5 * (v + apply_pauli(g, v))
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            v = v / norm
            k = int(np.argmax(np.abs(v)))
            return v * (abs(v[k]) / v[k])
    raise RuntimeError("projection onto the stabilizer state kept vanishing")


def expectation(psi: np.ndarray, p: PauliOperator) -> complex:
    return complex(np.vdot(psi, apply_pauli(p, psi)))


def require_normalized(psi: np.ndarray, tol: float = 1e-12) -> None:
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > tol:
        raise NotNormalized(f"state norm {norm!r} differs from 1")


def clifford_unitary(cliff: Clifford) -> np.ndarray:
    """Textbook matrix of a Clifford word (local qubit ``l`` is index bit ``l``)."""
    dim = 1 << cliff.k
    u = np.eye(dim, dtype=complex)
    for name, local in cliff.word:
        step = _embed(name, local, cliff.k)
        u = step @ u
    return u


def _embed(name: str, local: Sequence[int], k: int) -> np.ndarray:
    if name == "CNOT":
        if k != 2:
            raise ValueError("CNOT needs two qubits")
        if tuple(local) == (0, 1):
            return _CNOT
        swap = np.eye(4)[[0, 2, 1, 3]]
        return swap @ _CNOT @ swap
    gate = _H if name == "H" else _S
    if k == 1:
        return gate
    # kron puts its first factor on the high bit
    return np.kron(np.eye(2), gate) if local[0] == 0 else np.kron(gate, np.eye(2))


def apply_unitary(psi: np.ndarray, u: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    k = len(qubits)
    tensor = psi.reshape([2] * n)
    ut = u.reshape([2] * (2 * k))
    # tensor axis of qubit q is n-1-q; u axes list local bits high to low
    axes = [n - 1 - qubits[l] for l in reversed(range(k))]
    out = np.tensordot(ut, tensor, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(-1)


def simulate_circuit(n: int, layers: Sequence[Sequence[Gate]], psi: np.ndarray | None = None) -> np.ndarray:
    """Dense evolution of ``psi`` (default ``|0...0>``) through the layers."""
    _check_budget(n)
    if psi is None:
        psi = np.zeros(1 << n, dtype=complex)
        psi[0] = 1
    for layer in layers:
        for gate in layer:
            for cliff, qs in gate.ops:
                psi = apply_unitary(psi, clifford_unitary(cliff), qs, n)
    return psi
