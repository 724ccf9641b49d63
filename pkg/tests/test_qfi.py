from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import ghz_vector, kron_pauli, variance
from stabqfi.clifford import random_stabilizer_state
from stabqfi.dense import statevector
from stabqfi.errors import BudgetExceeded, NotDensityMatrix, NotNormalized
from stabqfi.hamiltonian import PauliHamiltonian
from stabqfi.pauli import PauliOperator, parse_pauli
from stabqfi.qfi import (
    convexity_check,
    correlation,
    qfi_mixed_dense,
    qfi_pure_dense,
    qfi_stabilizer,
    qfi_stabilizer_pairwise,
)
from stabqfi.state import StabilizerState


def ghz(n: int) -> StabilizerState:
    gens = [PauliOperator.hermitian(n, (1 << n) - 1, 0)]
    gens += [PauliOperator.hermitian(n, 0, 0b11 << q) for q in range(n - 1)]
    return StabilizerState(gens)


def random_local_hamiltonian(n: int, rng: np.random.Generator, k: int = 3, terms: int | None = None) -> PauliHamiltonian:
    out = []
    for _ in range(terms or int(rng.integers(1, 2 * n + 1))):
        supp = rng.choice(n, size=int(rng.integers(1, min(k, n) + 1)), replace=False)
        x = z = 0
        for q in supp:
            letter = int(rng.integers(1, 4))
            x |= (letter & 1) << int(q)
            z |= (letter >> 1) << int(q)
        out.append((float(rng.normal()), PauliOperator.hermitian(n, x, z)))
    return PauliHamiltonian(n, out)


def test_zero_state_sum_z():
    assert qfi_stabilizer(StabilizerState.zero(4), PauliHamiltonian.sum_z(4)).value == 0


def test_plus_state_sum_z():
    plus = StabilizerState([PauliOperator.single(4, q, "X") for q in range(4)])
    assert qfi_stabilizer(plus, PauliHamiltonian.sum_z(4)).value == 4


@pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
def test_ghz_is_heisenberg(n):
    report = qfi_stabilizer(ghz(n), PauliHamiltonian.sum_z(n))
    assert report.value == n * n
    assert report.correlation_matrix.sum() == pytest.approx(n * n)
    assert report.m == n
    assert variance(ghz_vector(n), PauliHamiltonian.sum_z(n)) == pytest.approx(n * n)


def test_correlation_of_ghz_pair():
    s = ghz(3)
    assert correlation(s, parse_pauli("ZII"), parse_pauli("IIZ")) == 1
    assert correlation(s, parse_pauli("ZII"), parse_pauli("XXX")) == 0


@pytest.mark.parametrize("a", [2.0, -1.0, 0.5])
def test_quadratic_scaling(a, rng):
    for _ in range(10):
        n = int(rng.integers(1, 8))
        s = random_stabilizer_state(n, rng)
        h = random_local_hamiltonian(n, rng)
        base = qfi_stabilizer(s, h).value
        assert qfi_stabilizer(s, h.scaled(a)).value == pytest.approx(a * a * base, abs=1e-9)


@settings(max_examples=40)
@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_nonnegative_and_matches_pairwise(n, seed):
    rng = np.random.default_rng(seed)
    s = random_stabilizer_state(n, rng)
    h = random_local_hamiltonian(n, rng)
    value = qfi_stabilizer(s, h).value
    assert value >= -1e-12
    assert value == pytest.approx(qfi_stabilizer_pairwise(s, h), abs=1e-9)


@settings(max_examples=40)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_matches_dense(n, seed):
    rng = np.random.default_rng(seed)
    s = random_stabilizer_state(n, rng)
    h = random_local_hamiltonian(n, rng)
    psi = statevector(s)
    assert abs(qfi_stabilizer(s, h).value - qfi_pure_dense(psi, h)) <= 1e-9


def test_dense_oracles_agree(rng):
    # qfi_pure_dense against the textbook Kronecker variance in helpers
    for _ in range(10):
        n = int(rng.integers(1, 6))
        psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        psi /= np.linalg.norm(psi)
        h = random_local_hamiltonian(n, rng)
        assert qfi_pure_dense(psi, h) == pytest.approx(variance(psi, h), abs=1e-9)


def test_correlation_matrix_sums_to_value(rng):
    for _ in range(20):
        n = int(rng.integers(1, 8))
        s = random_stabilizer_state(n, rng)
        h = random_local_hamiltonian(n, rng)
        rep = qfi_stabilizer(s, h)
        c = h.coeffs
        assert c @ rep.correlation_matrix @ c == pytest.approx(rep.value, abs=1e-9)


def test_matrix_skipped_above_threshold():
    rep = qfi_stabilizer(ghz(6), PauliHamiltonian.sum_z(6), matrix_threshold=3)
    assert rep.correlation_matrix is None
    assert rep.value == 36


def test_mixed_closed_form():
    rho = np.diag([0.75, 0.25]).astype(complex)
    h = PauliHamiltonian(1, [(1.0, parse_pauli("X"))])
    # 2 (0.5)^2 / 1 * |<0|X|1>|^2 = 0.25 after the 1/2 prefactor and symmetric pair
    assert qfi_mixed_dense(rho, h) == pytest.approx(0.25, abs=1e-10)


def test_maximally_mixed_has_zero_qfi():
    h = PauliHamiltonian(1, [(1.0, parse_pauli("X"))])
    assert qfi_mixed_dense(np.eye(2) / 2, h) == pytest.approx(0.0, abs=1e-12)


def test_convexity_example():
    h = PauliHamiltonian(1, [(1.0, parse_pauli("X"))])
    zero, one = np.array([1, 0], complex), np.array([0, 1], complex)
    lhs, rhs, ok = convexity_check([(0.5, zero), (0.5, one)], h)
    assert lhs == pytest.approx(0.0, abs=1e-12)
    assert rhs == pytest.approx(1.0)
    assert ok


def test_rank_one_reduction(rng):
    for _ in range(20):
        n = int(rng.integers(1, 6))
        s = random_stabilizer_state(n, rng)
        h = random_local_hamiltonian(n, rng)
        psi = statevector(s)
        rho = np.outer(psi, psi.conj())
        assert qfi_mixed_dense(rho, h) == pytest.approx(qfi_stabilizer(s, h).value, abs=1e-9)


def test_convexity_random(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        h = random_local_hamiltonian(n, rng)
        comps = []
        w = rng.uniform(0.05, 0.95)
        for weight in (w, 1 - w):
            comps.append((weight, statevector(random_stabilizer_state(n, rng))))
        _, _, ok = convexity_check(comps, h)
        assert ok


def test_invalid_inputs():
    h = PauliHamiltonian(1, [(1.0, parse_pauli("X"))])
    with pytest.raises(NotNormalized):
        qfi_pure_dense(np.array([1.0, 1.0], complex), h)
    with pytest.raises(NotDensityMatrix):
        qfi_mixed_dense(np.diag([0.5, 0.6]), h)
    with pytest.raises(NotDensityMatrix):
        qfi_mixed_dense(np.diag([1.5, -0.5]), h)
    with pytest.raises(NotDensityMatrix):
        qfi_mixed_dense(np.array([[0.5, 0.5], [0.0, 0.5]]), h)
    with pytest.raises(ValueError):
        convexity_check([(0.7, np.array([1, 0], complex))], h)


def test_dense_budget():
    n = 20
    with pytest.raises(BudgetExceeded):
        qfi_pure_dense(np.zeros(1), PauliHamiltonian.sum_z(n))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        qfi_stabilizer(StabilizerState.zero(2), PauliHamiltonian.sum_z(3))
