"""Quantum Fisher information of Pauli-sum Hamiltonians.

Convention: for a pure state ``F = <H^2> - <H>^2`` and for a mixed state
``F = 1/2 sum_ij (l_i - l_j)^2 / (l_i + l_j) |<i|H|j>|^2`` (no factor 4).

The stabilizer path never builds a vector. For Paulis ``P_j`` in a stabilizer
state, ``<P_j P_k>`` vanishes unless ``P_j`` and ``P_k`` have the same
syndrome. Inside one syndrome class with a reference term ``r``, write
``P_j = A_j P_r`` where ``A_j`` is proportional to a stabilizer, with
``<A_j> = w_j``. Then ``<P_j P_k> = w_j w_k e_k``, where ``e_k = +/-1`` records
whether ``P_r`` commutes with ``P_k``. The double sum over a class therefore
factorizes into ``(sum_j c_j w_j) (sum_k c_k w_k e_k)``, which is linear in
the number of terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dense import DENSE_MAX_QUBITS, _check_budget, apply_hamiltonian, hamiltonian_matrix
from .dense import require_normalized
from .errors import NotDensityMatrix
from .hamiltonian import LocalityProfile, PauliHamiltonian, validate_k_local
from .pauli import PauliOperator, require_hermitian, symplectic_product
from .state import StabilizerState

MATRIX_THRESHOLD = 512

_RE = (1, 0, -1, 0)  # real part of i**e
_IM = (0, 1, 0, -1)


@dataclass
class BoundCheck:
    name: str
    value: float
    ok: bool


@dataclass
class QfiReport:
    value: float
    m: int
    locality: LocalityProfile
    correlation_matrix: np.ndarray | None = None
    bound_checks: list[BoundCheck] = field(default_factory=list)

    def check_bound(self, name: str, bound: float, tol: float = 1e-9) -> bool:
        ok = self.value <= bound + tol
        self.bound_checks.append(BoundCheck(name, bound, ok))
        return ok

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "m": self.m,
            "K_support": self.locality.K_support,
            "K_degree": self.locality.K_degree,
            "bounds": [{"name": b.name, "value": b.value, "ok": b.ok} for b in self.bound_checks],
        }


def correlation(state: StabilizerState, p: PauliOperator, q: PauliOperator) -> float:
    """Real part of ``<PQ> - <P><Q>``, i.e. the symmetrized correlation."""
    require_hermitian(p)
    require_hermitian(q)
    e = state.stabilizer_phase(p * q)
    pq = 0 if e is None else _RE[e]
    return pq - state.expectation(p) * state.expectation(q)


def _class_terms(state: StabilizerState, ops: Sequence[PauliOperator]):
    """Per term: syndrome, ``<P_j P_ref>`` phase exponent and commutation sign with the reference."""
    refs: dict[int, int] = {}
    out = []
    for j, p in enumerate(ops):
        syn, _ = state.syndrome_and_coordinates(p)
        r = refs.setdefault(syn, j)
        ref = ops[r]
        e = state.stabilizer_phase(p * ref)
        assert e is not None, "same-syndrome product must be a stabilizer up to phase"
        sign = -1 if symplectic_product(ref, p) else 1
        out.append((syn, e, sign))
    return out


def second_moment(state: StabilizerState, h: PauliHamiltonian) -> float:
    """``<H^2>`` by syndrome classes; linear in the number of terms."""
    acc: dict[int, list[float]] = {}
    for (c, _), (syn, e, sign) in zip(h.terms, _class_terms(state, h.ops)):
        a = acc.setdefault(syn, [0.0, 0.0, 0.0, 0.0])
        a[0] += c * _RE[e]
        a[1] += c * _IM[e]
        a[2] += c * _RE[e] * sign
        a[3] += c * _IM[e] * sign
    return sum(a[0] * a[2] - a[1] * a[3] for a in acc.values())


def mean(state: StabilizerState, h: PauliHamiltonian) -> float:
    return sum(c * state.expectation(p) for c, p in h.terms)


def correlation_matrix(state: StabilizerState, h: PauliHamiltonian) -> np.ndarray:
    """``m x m`` matrix of symmetrized correlations between Pauli terms."""
    info = _class_terms(state, h.ops)
    means = np.array([state.expectation(p) for p in h.ops], dtype=float)
    size = len(info)
    mat = np.zeros((size, size))
    for j in range(size):
        sj, ej, _ = info[j]
        for k in range(size):
            sk, ek, gk = info[k]
            if sj == sk:
                mat[j, k] = _RE[(ej + ek) % 4] * gk
    return mat - np.outer(means, means)


def qfi_stabilizer(
    state: StabilizerState,
    h: PauliHamiltonian,
    matrix_threshold: int = MATRIX_THRESHOLD,
) -> QfiReport:
    """Exact pure-state QFI of a stabilizer state; no statevector is built."""
    if h.n != state.n:
        raise ValueError(f"{h.n}-qubit Hamiltonian on a {state.n}-qubit state")
    value = second_moment(state, h) - mean(state, h) ** 2
    mat = None
    if len(h.terms) <= matrix_threshold:
        mat = correlation_matrix(state, h)
    return QfiReport(value=value, m=h.m, locality=validate_k_local(h), correlation_matrix=mat)


def qfi_stabilizer_pairwise(state: StabilizerState, h: PauliHamiltonian) -> float:
    """Reference implementation: every pair evaluated through :func:`correlation`."""
    total = 0.0
    for c1, p in h.terms:
        for c2, q in h.terms:
            total += c1 * c2 * correlation(state, p, q)
    return total


def qfi_pure_dense(psi: np.ndarray, h: PauliHamiltonian) -> float:
    """``<H^2> - <H>^2`` computed as ``|H psi|^2 - <psi|H|psi>^2``."""
    _check_budget(h.n, DENSE_MAX_QUBITS)
    require_normalized(psi)
    hpsi = apply_hamiltonian(h, psi)
    second = float(np.vdot(hpsi, hpsi).real)
    first = complex(np.vdot(psi, hpsi))
    return second - first.real**2


def require_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NotDensityMatrix("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise NotDensityMatrix("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise NotDensityMatrix(f"trace {np.trace(rho).real:.3g} differs from 1")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise NotDensityMatrix("density matrix has a negative eigenvalue")
    return rho


def qfi_mixed_dense(rho: np.ndarray, h: PauliHamiltonian, eigencut: float = 1e-12) -> float:
    """Mixed-state QFI from a full eigendecomposition of ``rho``."""
    rho = require_density_matrix(rho)
    if rho.shape[0] != 1 << h.n or h.n > 10:
        raise NotDensityMatrix(f"need a 2^{h.n} x 2^{h.n} density matrix with at most 10 qubits")
    lam, vecs = np.linalg.eigh(rho)
    hm = vecs.conj().T @ hamiltonian_matrix(h) @ vecs
    num = (lam[:, None] - lam[None, :]) ** 2
    den = lam[:, None] + lam[None, :]
    keep = den > eigencut
    weights = np.zeros_like(den)
    weights[keep] = num[keep] / den[keep]
    return 0.5 * float(np.sum(weights * np.abs(hm) ** 2))


def mixture(weights: Sequence[float], vectors: Sequence[np.ndarray]) -> np.ndarray:
    return sum(w * np.outer(v, v.conj()) for w, v in zip(weights, vectors))


def convexity_check(
    components: Sequence[tuple[float, np.ndarray]],
    h: PauliHamiltonian,
    tol: float = 1e-8,
) -> tuple[float, float, bool]:
    """QFI of the mixture versus the weighted QFIs of its pure components."""
    weights = np.array([w for w, _ in components], dtype=float)
    if len(weights) == 0 or np.any(weights < 0) or abs(weights.sum() - 1) > 1e-10:
        raise ValueError("mixture weights must be non-negative and sum to one")
    vectors = [v for _, v in components]
    lhs = qfi_mixed_dense(mixture(weights, vectors), h)
    rhs = float(sum(w * qfi_pure_dense(v, h) for w, v in zip(weights, vectors)))
    return lhs, rhs, lhs <= rhs + tol
