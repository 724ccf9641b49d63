from __future__ import annotations

import numpy as np
import pytest

from helpers import kron_pauli
from stabqfi.clifford import Gate, cnot, h as hadamard, random_clifford
from stabqfi.dense import simulate_circuit
from stabqfi.errors import BoundViolation, OverlappingSupports
from stabqfi.hamiltonian import PauliHamiltonian
from stabqfi.lightcone import (
    ConnectivityModel,
    LayeredCircuit,
    brickwork_pairs,
    correlation_prune_pairs,
    g_function,
    ghz_circuit,
    lightcone,
    random_clifford_circuit,
    theorem1_bound,
    verify_theorem1,
)
from stabqfi.pauli import PauliOperator, format_pauli
from stabqfi.qfi import correlation, qfi_stabilizer

GRID1 = ConnectivityModel("grid", 2, 1)


def test_g_function_values():
    assert g_function(GRID1, 0) == 1
    assert g_function(GRID1, 3) == 7
    assert g_function(ConnectivityModel("grid", 3, 2), 1) == 25
    assert g_function(ConnectivityModel("all_to_all", 2), 4) == 16
    assert theorem1_bound(16, 1, GRID1, 2) == 16 * 9
    with pytest.raises(ValueError):
        g_function(GRID1, -1)
    with pytest.raises(ValueError):
        ConnectivityModel("ring")


def test_brickwork_pairs():
    assert brickwork_pairs(6, 0) == [(0, 1), (2, 3), (4, 5)]
    assert brickwork_pairs(6, 1) == [(1, 2), (3, 4)]
    assert brickwork_pairs(5, 2) == [(0, 1), (2, 3)]


def test_forward_and_backward_cones_differ():
    layers = [[Gate.of(random_clifford(2, np.random.default_rng(0)), 1, 2)],
              [cnot(0, 1), cnot(2, 3)]]
    c = LayeredCircuit(4, layers)
    assert lightcone(c, [0], "backward") == {0, 1, 2}
    assert lightcone(c, [0], "forward") == {0, 1}


def test_lightcone_growth_is_bounded(rng):
    n = 24
    for t in range(5):
        c = random_clifford_circuit(n, t, GRID1, seed=t)
        for q in range(n):
            cone = lightcone(c, [q])
            assert len(cone) <= g_function(GRID1, t)
            assert max(cone) - min(cone) + 1 == len(cone)


def test_prune_pairs_are_uncorrelated():
    n = 8
    for seed in range(10):
        c = random_clifford_circuit(n, 2, GRID1, seed=seed)
        state = c.prepare()
        h = PauliHamiltonian.sum_z(n)
        psi = simulate_circuit(n, c.layers)
        pruned = correlation_prune_pairs(c, h)
        assert pruned
        for j, k in pruned:
            p, q = h.ops[j], h.ops[k]
            assert correlation(state, p, q) == 0
            zj = kron_pauli(format_pauli(p))
            zk = kron_pauli(format_pauli(q))
            dense = np.vdot(psi, zj @ zk @ psi) - np.vdot(psi, zj @ psi) * np.vdot(psi, zk @ psi)
            assert abs(dense) < 1e-9


def test_forward_pruning_would_be_wrong():
    # Z_0 and Z_3 after this circuit are correlated although their forward cones are disjoint
    layers = [[hadamard(1)], [cnot(1, 2)], [cnot(1, 0), cnot(2, 3)]]
    c = LayeredCircuit(4, layers)
    state = c.prepare()
    z0, z3 = PauliOperator.single(4, 0, "Z"), PauliOperator.single(4, 3, "Z")
    assert correlation(state, z0, z3) == 1
    assert not lightcone(c, [0], "forward") & lightcone(c, [3], "forward")
    assert (0, 3) not in correlation_prune_pairs(c, PauliHamiltonian.sum_z(4))


def test_seed_stability():
    a = random_clifford_circuit(12, 4, GRID1, seed=7)
    b = random_clifford_circuit(12, 4, GRID1, seed=7)
    c = random_clifford_circuit(12, 4, GRID1, seed=8)
    assert a == b
    assert a != c


def test_circuit_validation():
    with pytest.raises(OverlappingSupports):
        LayeredCircuit(3, [[cnot(0, 1), cnot(1, 2)]])
    with pytest.raises(ValueError):
        LayeredCircuit(2, [[cnot(0, 2)]])
    with pytest.raises(ValueError):
        random_clifford_circuit(6, 1, ConnectivityModel("grid", 3, 1), seed=0)


def test_two_dimensional_blocks():
    model = ConnectivityModel("grid", 2, 2, shape=(4, 4))
    c = random_clifford_circuit(16, 2, model, seed=3)
    assert all(len(g.qubits) == 4 for layer in c.layers for g in layer)
    state = c.prepare()
    assert qfi_stabilizer(state, PauliHamiltonian.sum_z(16)).value <= theorem1_bound(16, 1, model, 2)


def test_all_to_all_circuit_matches_dense():
    n = 6
    c = random_clifford_circuit(n, 3, ConnectivityModel("all_to_all", 2), seed=2)
    state = c.prepare()
    psi = simulate_circuit(n, c.layers)
    h = PauliHamiltonian.sum_z(n)
    from stabqfi.qfi import qfi_pure_dense

    assert abs(qfi_stabilizer(state, h).value - qfi_pure_dense(psi, h)) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 5, 8, 9, 16])
def test_ghz_circuit(n):
    c = ghz_circuit(n)
    assert c.depth == int(np.ceil(np.log2(n)))
    assert qfi_stabilizer(c.prepare(), PauliHamiltonian.sum_z(n)).value == n * n


def test_verify_theorem1_parallel_matches_serial():
    h = PauliHamiltonian.sum_z(12)
    serial = verify_theorem1(12, 2, GRID1, h, 12, seed=5)
    parallel = verify_theorem1(12, 2, GRID1, h, 12, seed=5, jobs=2)
    assert serial.values == parallel.values
    assert serial.violations == 0
    assert serial.bound == 12 * 9


def test_verify_theorem1_reports_violations(monkeypatch):
    from stabqfi import lightcone as lc

    h = PauliHamiltonian.sum_z(8)
    monkeypatch.setattr(lc, "theorem1_bound", lambda m, K, model, t: 0)
    rep = lc.verify_theorem1(8, 3, GRID1, h, 30, seed=0, raise_on_violation=False)
    assert rep.violations > 0
    with pytest.raises(BoundViolation):
        lc.verify_theorem1(8, 3, GRID1, h, 30, seed=0)
