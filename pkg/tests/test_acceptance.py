"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import time

import numpy as np

from helpers import ghz_vector, variance
from stabqfi.cli import run_sweep
from stabqfi.clifford import random_stabilizer_state
from stabqfi.codes import distance_bruteforce
from stabqfi.constructions import (
    appendix_d_bundle,
    appendix_d_levels,
    asymmetric_toric_bundle,
    classical_ldpc_code,
    cycle_ldpc_bundle,
    five_qubit_code,
    ghz_bundle,
    steane_code,
    toric_code,
)
from stabqfi.dense import statevector
from stabqfi.graphs import complete_graph, cycle_graph, girth, theta_graph
from stabqfi.hamiltonian import PauliHamiltonian
from stabqfi.lightcone import ConnectivityModel, verify_theorem1
from stabqfi.pauli import PauliOperator, parse_pauli
from stabqfi.qfi import convexity_check, qfi_mixed_dense, qfi_pure_dense, qfi_stabilizer
from stabqfi.verify import verify_theorem2, verify_toric_mixtures, verify_toric_sum_z

SWEEP_PARAMS = {"c": 2, "t": 2, "model": "grid", "kappa": 2, "r": 1, "shape": None, "trials": 20, "seed": 0}


def random_local_hamiltonian(n, rng, k=3):
    terms = []
    for _ in range(int(rng.integers(1, 2 * n + 1))):
        supp = rng.choice(n, size=int(rng.integers(1, min(k, n) + 1)), replace=False)
        x = z = 0
        for q in supp:
            letter = int(rng.integers(1, 4))
            x |= (letter & 1) << int(q)
            z |= (letter >> 1) << int(q)
        terms.append((float(rng.uniform(-1, 1)), PauliOperator.hermitian(n, x, z)))
    return PauliHamiltonian(n, terms)


def haar_vector(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def test_criterion_01_ghz(acceptance):
    worst_dense = 0.0
    exact = True
    for n in range(2, 11):
        b = ghz_bundle(n)
        h = b.hamiltonian
        exact &= qfi_stabilizer(b.state, h).value == n * n
        worst_dense = max(worst_dense, abs(qfi_pure_dense(statevector(b.state), h) - n * n))
        worst_dense = max(worst_dense, abs(variance(ghz_vector(n), h) - n * n))
    start = time.perf_counter()
    bundles = [ghz_bundle(n) for n in range(2, 257)]
    built = time.perf_counter()
    for b in bundles:
        n = b.code.n
        exact &= qfi_stabilizer(b.state, b.hamiltonian, matrix_threshold=0).value == n * n
    done = time.perf_counter()
    elapsed = done - built
    ok = exact and worst_dense <= 1e-9 and elapsed < 10
    acceptance(1, ok, f"F = n^2 for n=2..256 exact={exact}, dense diff {worst_dense:.1e}, "
                      f"engine {elapsed:.2f}s (+{built - start:.2f}s state construction)")
    assert ok


def test_criterion_02_asymmetric_toric(acceptance):
    exact = True
    reported = []
    for c in (1, 2):
        for Lx in range(3, 9):
            b = asymmetric_toric_bundle(c, Lx)
            value = qfi_stabilizer(b.state, b.hamiltonian).value
            exact &= value == Lx * Lx
            reported.append((c, Lx, value, b.details["n_squared_over_c_squared"]))
    b = asymmetric_toric_bundle(2, 3)
    diff = abs(qfi_pure_dense(statevector(b.state), b.hamiltonian) - 9)
    ok = exact and b.code.n == 12 and diff <= 1e-9
    c, Lx, value, displayed = reported[-1]
    acceptance(2, ok, f"F = Lx^2 exact={exact}, dense diff {diff:.1e}; e.g. c={c}, Lx={Lx}: F={value:g} vs n^2/c^2={displayed:g}")
    assert ok


def test_criterion_03_appendix_d(acceptance):
    exact = closed = True
    worst_dense = 0.0
    sizes = list(range(4, 65)) + [96, 128, 200, 256, 384, 512]
    for n in sizes:
        b = appendix_d_bundle(cycle_graph(n), 0, 1)
        exact &= b.details["delta"] == n - 1
        exact &= qfi_stabilizer(b.state, b.hamiltonian, matrix_threshold=0).value == n * n
        words, forms = appendix_d_levels(cycle_graph(n), 0, 1)
        closed &= words == forms
        if n <= 12:
            worst_dense = max(worst_dense, abs(qfi_pure_dense(statevector(b.state), b.hamiltonian) - n * n))
    ok = exact and closed and worst_dense <= 1e-9
    acceptance(3, ok, f"C_n, n=4..512: F=(Delta+1)^2 exact={exact}, closed form={closed}, dense diff {worst_dense:.1e}")
    assert ok


def test_criterion_04_nondegenerate_codes(acceptance):
    start = time.perf_counter()
    sweeps = [verify_theorem2(five_qubit_code(), 200, seed=11, name="five_qubit"),
              verify_theorem2(steane_code(), 200, seed=12, name="steane")]
    elapsed = time.perf_counter() - start
    violations = sum(s.violations for s in sweeps)
    diff = max(s.max_dense_diff for s in sweeps)
    bounds_ok = [s.bound for s in sweeps] == [5.0, 7.0]
    ok = violations == 0 and diff <= 1e-9 and bounds_ok and elapsed < 60
    worst = ", ".join(f"{s.name} max {s.max_qfi:.3f}/{s.bound:g}" for s in sweeps)
    acceptance(4, ok, f"{violations} violations, {worst}, dense diff {diff:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_05_toric_sum_z(acceptance):
    exact = True
    violations = 0
    for L in (2, 3, 4):
        value, m, vanish = verify_toric_sum_z(L)
        exact &= value == m and vanish
        violations += verify_toric_mixtures(L, 100, seed=L).violations
    ok = exact and violations == 0
    acceptance(5, ok, f"F == m with vanishing correlations={exact}, {violations} mixture violations")
    assert ok


def test_criterion_06_shallow_circuits(acceptance):
    model = ConnectivityModel("grid", 2, 1)
    start = time.perf_counter()
    violations = 0
    ratio = 0.0
    for n in (12, 16, 24):
        h = PauliHamiltonian.sum_z(n)
        for t in range(5):
            rep = verify_theorem1(n, t, model, h, 200, seed=1000 * n + 10 * t, raise_on_violation=False)
            assert rep.bound == n * (2 * (model.kappa - 1) * 2 * t + 1)
            violations += rep.violations
            ratio = max(ratio, rep.max_ratio)
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 300
    acceptance(6, ok, f"{violations} violations over 3000 circuits, max ratio {ratio:.3f}, {elapsed:.1f}s")
    assert ok


def test_criterion_07_oracle_equivalence(acceptance):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 11))
        state = random_stabilizer_state(n, rng)
        h = random_local_hamiltonian(n, rng)
        worst = max(worst, abs(qfi_stabilizer(state, h).value - qfi_pure_dense(statevector(state), h)))
    ok = worst <= 1e-9
    acceptance(7, ok, f"500 triples, max |stabilizer - dense| = {worst:.1e}")
    assert ok


def test_criterion_08_mixed_states(acceptance):
    hx = PauliHamiltonian(1, [(1.0, parse_pauli("X"))])
    closed = qfi_mixed_dense(np.diag([0.75, 0.25]).astype(complex), hx)
    rng = np.random.default_rng(8)
    convex_fail = 0
    for _ in range(100):
        n = int(rng.integers(1, 5))
        h = random_local_hamiltonian(n, rng)
        w = float(rng.uniform(0.01, 0.99))
        comps = [(w, haar_vector(1 << n, rng)), (1 - w, haar_vector(1 << n, rng))]
        convex_fail += not convexity_check(comps, h, tol=1e-8)[2]
    rank_one = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 6))
        h = random_local_hamiltonian(n, rng)
        psi = haar_vector(1 << n, rng)
        rank_one = max(rank_one, abs(qfi_mixed_dense(np.outer(psi, psi.conj()), h) - variance(psi, h)))
    ok = abs(closed - 0.25) <= 1e-10 and convex_fail == 0 and rank_one <= 1e-9
    acceptance(8, ok, f"diag(3/4,1/4) with X: {closed:.12f}, {convex_fail} convexity failures, rank-1 diff {rank_one:.1e}")
    assert ok


def test_criterion_09_scaling_fits(acceptance):
    fits = {}
    _, fits["ghz"] = run_sweep("ghz", [4, 8, 16, 32, 64, 128], SWEEP_PARAMS)
    _, fits["asym_toric"] = run_sweep("asym_toric", [3, 4, 5, 6, 7, 8], SWEEP_PARAMS)
    _, fits["appendix_d"] = run_sweep("appendix_d", [4, 8, 16, 32, 64, 128], SWEEP_PARAMS)
    rows, _ = run_sweep("random_shallow", [12, 16, 24, 32], SWEEP_PARAMS)
    violations = sum(r["violations"] for r in rows)
    good = all(abs(f.exponent - 2) <= 0.01 and f.r_squared > 0.9999 for f in fits.values())
    ok = good and violations == 0
    summary = ", ".join(f"{k} {f.exponent:.4f} (r2 {f.r_squared:.6f})" for k, f in fits.items())
    acceptance(9, ok, f"exponents {summary}; random shallow violations {violations}")
    assert ok


def test_criterion_10_structure(acceptance):
    distances = {
        "five_qubit": distance_bruteforce(five_qubit_code()),
        "steane": distance_bruteforce(steane_code()),
        "toric2": distance_bruteforce(toric_code(2, 2)),
        "toric3": distance_bruteforce(toric_code(3, 3)),
    }
    dist_ok = distances == {"five_qubit": 3, "steane": 3, "toric2": 2, "toric3": 3}
    graphs = [cycle_graph(n) for n in range(3, 20)] + [complete_graph(5), theta_graph([2, 3, 4]), theta_graph([5, 6, 7])]
    codes = [classical_ldpc_code(g) for g in graphs]
    codes += [cycle_ldpc_bundle(9).code, ghz_bundle(6).code, appendix_d_bundle(theta_graph([3, 4, 5]), 0, 2).code]
    weights_ok = all(set(c.z_column_weights()) == {2} for c in codes)
    girth_ok = all(girth(cycle_graph(n)) == n for n in range(3, 200))
    ok = dist_ok and weights_ok and girth_ok
    acceptance(10, ok, f"distances {distances}, Hz column weights 2: {weights_ok}, girth(C_n)=n: {girth_ok}")
    assert ok
