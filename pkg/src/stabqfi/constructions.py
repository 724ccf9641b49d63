"""State and Hamiltonian families with known QFI.

Each builder returns a :class:`ConstructionBundle` holding the code, the
probe state, the Hamiltonian and the predicted QFI. The prediction comes from
a closed form and is compared against the engine in the tests.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .codes import CssCode, StabilizerCode, code_to_json, write_alist
from .errors import DegreeViolation, DisconnectedGraph, EdgeMissing, InvalidDimensions
from .graphs import Graph, bfs_tree, cycle_graph, fundamental_cycles, girth
from .hamiltonian import PauliHamiltonian
from .jsonfmt import dumps
from .pauli import PauliOperator, format_pauli, parse_pauli, support_to_int
from .state import StabilizerState


class WidthWarning(UserWarning):
    """A size-dependent constant (tree width, locality) exceeds its configured limit."""


@dataclass
class ConstructionBundle:
    name: str
    code: CssCode
    state: StabilizerState
    hamiltonian: PauliHamiltonian
    predicted_qfi: float
    note: str = ""
    details: dict = field(default_factory=dict)

    def prediction_json(self) -> dict:
        return {"family": self.name, "value": self.predicted_qfi, "m": self.hamiltonian.m,
                "n": self.code.n, "note": self.note, **self.details}

    def save(self, directory: str | Path) -> Path:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        (out / "code.alist").write_text(write_alist(self.code.hz, self.code.n))
        (out / "code.json").write_text(dumps(code_to_json(self.code)))
        (out / "hamiltonian.json").write_text(dumps(self.hamiltonian.to_json()))
        (out / "state.json").write_text(dumps(state_to_json(self.state)))
        (out / "prediction.json").write_text(dumps(self.prediction_json()))
        return out


def state_to_json(state: StabilizerState) -> dict:
    return {
        "n": state.n,
        "generators": [format_pauli(g.unsigned()) for g in state.generators],
        "signs": list(state.signs),
    }


def state_from_json(data: dict) -> StabilizerState:
    n = int(data["n"])
    gens = [parse_pauli(t) for t in data["generators"]]
    signs = data.get("signs", [1] * len(gens))
    if len(signs) != len(gens):
        raise ValueError("one sign per generator is required")
    for g in gens:
        if g.n != n:
            raise ValueError(f"generator of length {g.n} in a {n}-qubit state")
        if g.phase != PauliOperator.hermitian(n, g.x, g.z).phase:
            raise ValueError("generators must be unsigned; put signs in the 'signs' list")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    return StabilizerState.from_signs(gens, signs)


def load_state(path: str | Path) -> StabilizerState:
    return state_from_json(json.loads(Path(path).read_text()))


def load_hamiltonian(path: str | Path) -> PauliHamiltonian:
    return PauliHamiltonian.from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------- toric codes
@dataclass(frozen=True)
class ToricLayout:
    """Edges of an ``Lx x Ly`` periodic square lattice.

    Edge ``(i, j, o)`` starts at site ``(i, j)`` and points along x (``o=0``)
    or y (``o=1``); its qubit index is ``2 * (Lx * j + i) + o``.
    """

    Lx: int
    Ly: int

    @property
    def n(self) -> int:
        return 2 * self.Lx * self.Ly

    def edge(self, i: int, j: int, o: int) -> int:
        return 2 * (self.Lx * (j % self.Ly) + (i % self.Lx)) + o

    def plaquette(self, i: int, j: int) -> int:
        """Z-check on the face with lower-left corner ``(i, j)``."""
        word = 0
        for e in (self.edge(i, j, 0), self.edge(i, j + 1, 0), self.edge(i, j, 1), self.edge(i + 1, j, 1)):
            word ^= 1 << e
        return word

    def star(self, i: int, j: int) -> int:
        """X-check on the four edges meeting at site ``(i, j)``."""
        word = 0
        for e in (self.edge(i, j, 0), self.edge(i - 1, j, 0), self.edge(i, j, 1), self.edge(i, j - 1, 1)):
            word ^= 1 << e
        return word

    def column(self, i: int) -> int:
        """The y-edges ``(i, l)`` for all ``l``: a vertical cycle of weight ``Ly``."""
        return support_to_int(self.edge(i, l, 1) for l in range(self.Ly))

    def logical_words(self) -> dict[str, int]:
        return {
            "Z1": support_to_int(self.edge(i, 0, 0) for i in range(self.Lx)),
            "X1": support_to_int(self.edge(0, j, 0) for j in range(self.Ly)),
            "Z2": self.column(0),
            "X2": support_to_int(self.edge(i, 0, 1) for i in range(self.Lx)),
        }


def toric_code(Lx: int, Ly: int) -> CssCode:
    """Periodic toric code; plaquettes are Z checks and stars are X checks.

    Logical pairs: ``(X1, Z1)`` with ``Z1`` on the x-edges of row 0 (weight
    Lx) and ``X1`` on the x-edges of column 0 (weight Ly); ``(X2, Z2)`` with
    ``Z2`` on the y-edges of column 0 (weight Ly) and ``X2`` on the y-edges of
    row 0 (weight Lx).
    """
    if Lx < 2 or Ly < 1:
        raise InvalidDimensions(f"toric code needs Lx >= 2 and Ly >= 1, got ({Lx}, {Ly})")
    lay = ToricLayout(Lx, Ly)
    hz = [lay.plaquette(i, j) for j in range(Ly) for i in range(Lx)]
    hx = [lay.star(i, j) for j in range(Ly) for i in range(Lx)]
    w = lay.logical_words()
    n = lay.n
    logicals = [
        (PauliOperator.hermitian(n, w["X1"], 0), PauliOperator.hermitian(n, 0, w["Z1"])),
        (PauliOperator.hermitian(n, w["X2"], 0), PauliOperator.hermitian(n, 0, w["Z2"])),
    ]
    return CssCode(n, hz, hx, logicals)


def asymmetric_toric_bundle(c: int, Lx: int) -> ConstructionBundle:
    """``Ly = c`` toric code with ``H = sum_j Z`` on the y-edge column ``j``.

    The state is the +1 eigenstate of both logical X operators. Every term
    anticommutes with ``X2`` and every product of two terms is a product of
    plaquettes, so ``F = Lx**2``.
    """
    if c < 1 or Lx < 2:
        raise InvalidDimensions(f"need c >= 1 and Lx >= 2, got c={c}, Lx={Lx}")
    code = toric_code(Lx, c)
    lay = ToricLayout(Lx, c)
    state = code.code_state([("X", 1), ("X", 1)])
    terms = [(1.0, PauliOperator.hermitian(code.n, 0, lay.column(j))) for j in range(Lx)]
    h = PauliHamiltonian(code.n, terms)
    return ConstructionBundle(
        "asym_toric", code, state, h, float(Lx * Lx),
        note="F = Lx^2 from <H_j> = 0 and <H_j H_k> = 1",
        details={"c": c, "Lx": Lx, "n_squared_over_c_squared": (code.n / c) ** 2},
    )


# ---------------------------------------------------------------- classical LDPC family
def classical_ldpc_code(g: Graph, max_degree: int | None = None) -> CssCode:
    """Code with one qubit per edge and one Z check per vertex.

    There are no X checks, so every cycle of the graph is a logical X (the
    fundamental cycles of the BFS tree from vertex 0 form the basis) and the
    paired logical Z is the single chord edge that closes each cycle.
    """
    if g.has_self_loop():
        raise ValueError("self-loops are not allowed")
    if not g.is_connected():
        raise DisconnectedGraph("graph must be connected")
    for v in range(g.num_vertices):
        d = g.degree(v)
        if d < 2:
            raise DegreeViolation(f"vertex {v} has degree {d} < 2")
        if max_degree is not None and d > max_degree:
            raise DegreeViolation(f"vertex {v} has degree {d} > {max_degree}")
    n = g.num_edges
    hz = [0] * g.num_vertices
    for e, (u, v) in enumerate(g.edges):
        hz[u] |= 1 << e
        hz[v] |= 1 << e
    logicals = [
        (PauliOperator.hermitian(n, cycle, 0), PauliOperator.hermitian(n, 0, 1 << chord))
        for chord, cycle in fundamental_cycles(g, 0)
    ]
    return CssCode(n, hz, [], logicals)


def ghz_bundle(n: int) -> ConstructionBundle:
    """GHZ state as the logical ``X = +1`` state of the length-``n`` repetition code."""
    if n < 2:
        raise InvalidDimensions("GHZ needs n >= 2")
    code = classical_ldpc_code(cycle_graph(n))
    return ConstructionBundle("ghz", code, code.code_state(), PauliHamiltonian.sum_z(n), float(n * n),
                              note="F = n^2")


@dataclass
class GraphReport:
    girth: float
    delta: int
    tree_depth: int
    tree_width: int
    max_degree: int
    hamiltonian_degree: int


def appendix_d_bundle(
    g: Graph,
    vs: int,
    vt: int,
    max_width: int | None = None,
    max_k: int | None = None,
) -> ConstructionBundle:
    """BFS-layer Hamiltonian on a classical LDPC code with ``F = (Delta + 1)**2``.

    With ``e*`` the edge ``(vs, vt)`` and ``G'`` the graph without it, let
    ``L_0 = {vs}, L_1, ...`` be the BFS levels of ``G'`` from ``vs`` and
    ``Delta = dist_G'(vs, vt)``. The terms are ``H_1 = Z_e*`` and
    ``H_{j+1} = H_j Z_{L_{j-1}}``, where ``Z_L`` multiplies the vertex checks
    of ``L``. Each ``H_{j+1}`` reduces to ``Z`` on the ``G'`` edges between
    levels ``j-1`` and ``j``; this is asserted for every ``j``.
    """
    ids = g.edge_ids(vs, vt)
    if not ids:
        raise EdgeMissing(f"({vs}, {vt}) is not an edge")
    estar = ids[0]
    code = classical_ldpc_code(g)
    n = code.n
    rest = g.without_edge(estar)
    tree = bfs_tree(rest, vs)
    if vt not in tree.dist:
        raise DisconnectedGraph(f"removing ({vs}, {vt}) disconnects its endpoints")
    delta = tree.dist[vt]
    # edge ids of G' map back to G by skipping estar
    to_g = [e for e in range(g.num_edges) if e != estar]
    between: dict[int, int] = {}
    for e, (u, v) in enumerate(rest.edges):
        du, dv = tree.dist.get(u), tree.dist.get(v)
        if du is not None and dv is not None and abs(du - dv) == 1:
            lvl = max(du, dv)
            between[lvl] = between.get(lvl, 0) | (1 << to_g[e])
    words = [1 << estar]
    for j in range(1, delta + 1):
        layer = 0
        for v in tree.levels[j - 1]:
            layer ^= code.hz[v]
        words.append(words[-1] ^ layer)
        if words[-1] != between.get(j, 0):
            raise AssertionError(f"closed form fails at level {j}")
    if not any((lx.x >> estar) & 1 for lx, _ in code.logicals):
        raise AssertionError("no logical X covers the removed edge")
    terms = [(1.0, PauliOperator.hermitian(n, 0, w)) for w in words]
    h = PauliHamiltonian(n, terms)
    degree = max(sum((w >> q) & 1 for w in words) for q in range(n))
    report = GraphReport(
        girth=girth(g), delta=delta, tree_depth=tree.depth, tree_width=tree.width,
        max_degree=max(g.degree(v) for v in range(g.num_vertices)), hamiltonian_degree=degree,
    )
    k_value = max(max(w.bit_count() for w in words), degree)
    if max_width is not None and report.tree_width > max_width:
        warnings.warn(f"BFS tree width {report.tree_width} exceeds {max_width}", WidthWarning, stacklevel=2)
    if max_k is not None and k_value > max_k:
        warnings.warn(f"locality {k_value} exceeds {max_k}", WidthWarning, stacklevel=2)
    m = delta + 1
    return ConstructionBundle(
        "appendix_d", code, code.code_state(), h, float(m * m),
        note="F = (Delta + 1)^2",
        details={"delta": delta, "girth": report.girth, "tree_depth": report.tree_depth,
                 "tree_width": report.tree_width, "max_degree": report.max_degree,
                 "hamiltonian_degree": report.hamiltonian_degree},
    )


def appendix_d_levels(g: Graph, vs: int, vt: int) -> tuple[list[int], list[int]]:
    """Recursion products and the edge sets between consecutive levels, for inspection."""
    bundle = appendix_d_bundle(g, vs, vt)
    words = [p.z for p in bundle.hamiltonian.ops]
    estar = g.edge_ids(vs, vt)[0]
    rest = g.without_edge(estar)
    tree = bfs_tree(rest, vs)
    to_g = [e for e in range(g.num_edges) if e != estar]
    closed = [1 << estar]
    for j in range(1, len(words)):
        word = 0
        for e, (u, v) in enumerate(rest.edges):
            if {tree.dist.get(u), tree.dist.get(v)} == {j - 1, j}:
                word |= 1 << to_g[e]
        closed.append(word)
    return words, closed


# ---------------------------------------------------------------- reference codes
HAMMING_7 = [[1, 0, 1, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]]


def five_qubit_code() -> StabilizerCode:
    return StabilizerCode([parse_pauli(t) for t in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")])


def steane_code() -> CssCode:
    return CssCode.from_matrices(HAMMING_7, HAMMING_7)


def shor_code() -> CssCode:
    hz = [0b11 << 0, 0b11 << 1, 0b11 << 3, 0b11 << 4, 0b11 << 6, 0b11 << 7]
    hx = [0b111111, 0b111111 << 3]
    return CssCode(9, hz, hx)


def reference_codes() -> dict[str, StabilizerCode]:
    return {"five_qubit": five_qubit_code(), "steane": steane_code(), "shor": shor_code()}


def product_state_bundle(n: int) -> ConstructionBundle:
    """``|0...0>`` with ``H = sum Z``: an eigenstate, so ``F = 0``."""
    code = CssCode(n, [1 << q for q in range(n)], [])
    return ConstructionBundle("product", code, StabilizerState.zero(n), PauliHamiltonian.sum_z(n), 0.0,
                              note="eigenstate of H")


def toric_sum_z_bundle(L: int) -> ConstructionBundle:
    """toric(L, L) code state with ``H = sum Z``; single-qubit terms are uncorrelated, so ``F = n``."""
    code = toric_code(L, L)
    return ConstructionBundle("toric", code, code.code_state(), PauliHamiltonian.sum_z(code.n),
                              float(code.n), note="F = m")


def cycle_ldpc_bundle(n: int) -> ConstructionBundle:
    """Cycle-graph code state with ``H = sum Z`` over all edges (the GHZ state)."""
    bundle = ghz_bundle(n)
    bundle.name = "cycle_ldpc"
    return bundle
