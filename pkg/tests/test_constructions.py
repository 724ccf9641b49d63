from __future__ import annotations

import json
import warnings

import numpy as np
import pytest

from helpers import ghz_vector, variance
from stabqfi.codes import distance_bruteforce, read_alist
from stabqfi.constructions import (
    ToricLayout,
    WidthWarning,
    appendix_d_bundle,
    appendix_d_levels,
    asymmetric_toric_bundle,
    classical_ldpc_code,
    cycle_ldpc_bundle,
    ghz_bundle,
    load_hamiltonian,
    load_state,
    product_state_bundle,
    state_from_json,
    state_to_json,
    toric_code,
    toric_sum_z_bundle,
)
from stabqfi.dense import statevector
from stabqfi.errors import DegreeViolation, DisconnectedGraph, EdgeMissing, InvalidDimensions
from stabqfi.graphs import Graph, complete_graph, cycle_graph, path_graph, theta_graph
from stabqfi.qfi import qfi_pure_dense, qfi_stabilizer


def test_toric_checks_have_weight_four():
    for Lx, Ly in ((2, 2), (3, 3), (4, 2), (3, 5)):
        code = toric_code(Lx, Ly)
        assert code.n == 2 * Lx * Ly
        assert code.k == 2
        assert all(r.bit_count() == 4 for r in code.hz + code.hx)
        assert all(w == 2 for w in code.z_column_weights())


def test_toric_layout_logicals():
    lay = ToricLayout(4, 3)
    w = lay.logical_words()
    assert w["Z1"].bit_count() == 4 and w["X1"].bit_count() == 3
    assert w["Z2"].bit_count() == 3 and w["X2"].bit_count() == 4
    assert lay.column(2).bit_count() == 3


def test_toric_rejects_small():
    with pytest.raises(InvalidDimensions):
        toric_code(1, 3)
    with pytest.raises(InvalidDimensions):
        toric_code(3, 0)


def test_asymmetric_toric_sector_distances():
    code = toric_code(5, 2)
    # Z2 lives on a column of length c, X2 on a row of length Lx
    assert distance_bruteforce(code, "Z") == 2
    assert distance_bruteforce(code, "X") == 2


@pytest.mark.parametrize("c", [1, 2])
@pytest.mark.parametrize("Lx", [3, 4, 5, 6, 7, 8])
def test_asymmetric_toric_value(c, Lx):
    b = asymmetric_toric_bundle(c, Lx)
    assert qfi_stabilizer(b.state, b.hamiltonian).value == Lx * Lx
    assert b.predicted_qfi == Lx * Lx
    assert b.details["n_squared_over_c_squared"] == (2 * Lx) ** 2


def test_asymmetric_toric_dense():
    b = asymmetric_toric_bundle(2, 3)
    assert b.code.n == 12
    dense = qfi_pure_dense(statevector(b.state), b.hamiltonian)
    assert abs(dense - 9) <= 1e-9


@pytest.mark.parametrize("n", [2, 3, 6, 10])
def test_ghz_bundle_state(n):
    b = ghz_bundle(n)
    psi = statevector(b.state)
    assert abs(abs(np.vdot(ghz_vector(n), psi)) - 1) < 1e-9
    assert variance(psi, b.hamiltonian) == pytest.approx(n * n)


def test_classical_ldpc_structure():
    for g in (cycle_graph(5), complete_graph(4), theta_graph([2, 3, 4])):
        code = classical_ldpc_code(g)
        assert code.n == g.num_edges
        assert code.k == g.num_edges - g.num_vertices + 1
        assert all(w == 2 for w in code.z_column_weights())
        for lx, lz in code.logicals:
            assert lz.weight == 1


def test_classical_ldpc_rejections():
    with pytest.raises(DisconnectedGraph):
        classical_ldpc_code(Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]))
    with pytest.raises(DegreeViolation):
        classical_ldpc_code(path_graph(4))
    with pytest.raises(DegreeViolation):
        classical_ldpc_code(complete_graph(5), max_degree=3)
    with pytest.raises(ValueError):
        classical_ldpc_code(Graph(2, [(0, 0), (0, 1), (1, 0)]))


@pytest.mark.parametrize("n", range(4, 13))
def test_appendix_d_cycles_dense(n):
    b = appendix_d_bundle(cycle_graph(n), 0, 1)
    assert b.details["delta"] == n - 1
    value = qfi_stabilizer(b.state, b.hamiltonian).value
    assert value == n * n
    assert abs(qfi_pure_dense(statevector(b.state), b.hamiltonian) - n * n) <= 1e-9


def test_appendix_d_closed_form_words():
    for g, vs, vt in ((cycle_graph(9), 0, 1), (theta_graph([3, 4, 5]), 0, 2), (complete_graph(5), 0, 1)):
        words, closed = appendix_d_levels(g, vs, vt)
        assert words == closed


def test_appendix_d_theta():
    g = theta_graph([5, 6, 7])
    vt = g.adj[0][0][0]
    b = appendix_d_bundle(g, 0, vt)
    delta = b.details["delta"]
    assert qfi_stabilizer(b.state, b.hamiltonian).value == (delta + 1) ** 2


def test_appendix_d_errors():
    with pytest.raises(EdgeMissing):
        appendix_d_bundle(cycle_graph(6), 0, 3)


def test_appendix_d_width_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        appendix_d_bundle(theta_graph([4, 4, 4, 4]), 0, 2, max_width=1)
    assert any(issubclass(w.category, WidthWarning) for w in caught)


def test_simple_bundles():
    assert qfi_stabilizer(product_state_bundle(5).state, product_state_bundle(5).hamiltonian).value == 0
    b = toric_sum_z_bundle(3)
    assert qfi_stabilizer(b.state, b.hamiltonian).value == b.code.n
    c = cycle_ldpc_bundle(7)
    assert c.name == "cycle_ldpc"
    assert qfi_stabilizer(c.state, c.hamiltonian).value == 49


def test_bundle_save_round_trip(tmp_path):
    b = asymmetric_toric_bundle(2, 4)
    out = b.save(tmp_path / "bundle")
    state = load_state(out / "state.json")
    h = load_hamiltonian(out / "hamiltonian.json")
    assert state.same_state(b.state)
    assert qfi_stabilizer(state, h).value == 16
    n, rows = read_alist((out / "code.alist").read_text())
    assert n == b.code.n and tuple(rows) == b.code.hz
    pred = json.loads((out / "prediction.json").read_text())
    assert pred["value"] == 16 and pred["family"] == "asym_toric"


def test_state_json_validation():
    b = ghz_bundle(3)
    data = state_to_json(b.state)
    assert state_from_json(data).same_state(b.state)
    with pytest.raises(ValueError):
        state_from_json({**data, "signs": [1, 2, 1]})
    with pytest.raises(ValueError):
        state_from_json({**data, "generators": ["-ZZI", "IZZ", "XXX"]})
    with pytest.raises(ValueError):
        state_from_json({**data, "signs": [1]})
