"""Graphs, Tanner graphs, collapse graphs and related diagnostics."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .codes import CssCode
from .errors import EdgeMissing
from .gf2 import ReducedBasis, kernel
from .hamiltonian import PauliHamiltonian
from .pauli import iter_bits

INF = math.inf


class Graph:
    """Undirected multigraph; edge ``e`` is ``edges[e]`` and doubles as a qubit label."""

    def __init__(self, num_vertices: int, edges: Iterable[tuple[int, int]]) -> None:
        self.num_vertices = int(num_vertices)
        self.edges: list[tuple[int, int]] = []
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.num_vertices - 1}")
            e = len(self.edges)
            self.edges.append((u, v))
            self.adj[u].append((v, e))
            if u != v:
                self.adj[v].append((u, e))
        for nbrs in self.adj:
            nbrs.sort()

    def __repr__(self) -> str:
        return f"Graph(V={self.num_vertices}, E={len(self.edges)})"

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum(2 if u == v else 1 for u, _ in self.adj[v])

    def has_self_loop(self) -> bool:
        return any(u == v for u, v in self.edges)

    def edge_ids(self, u: int, v: int) -> list[int]:
        return [e for w, e in self.adj[u] if w == v]

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return True
        return len(bfs_tree(self, 0).order) == self.num_vertices

    def without_edge(self, e: int) -> Graph:
        return Graph(self.num_vertices, [uv for i, uv in enumerate(self.edges) if i != e])

    def to_json(self) -> dict:
        return {"vertices": self.num_vertices, "edges": [list(uv) for uv in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        return cls(int(data["vertices"]), [tuple(e) for e in data["edges"]])

    @classmethod
    def from_edge_list(cls, text: str, num_vertices: int | None = None) -> Graph:
        edges = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'u v'")
            edges.append((int(parts[0]), int(parts[1])))
        if num_vertices is None:
            num_vertices = 1 + max((max(e) for e in edges), default=-1)
        return cls(num_vertices, edges)

    @classmethod
    def load(cls, path: str | Path) -> Graph:
        path = Path(path)
        text = path.read_text()
        if path.suffix == ".json":
            return cls.from_json(json.loads(text))
        return cls.from_edge_list(text)


def cycle_graph(n: int) -> Graph:
    """C_n with edge ``i = (i, i+1 mod n)``; C_2 is a double edge."""
    if n < 2:
        raise ValueError("cycle needs at least 2 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def theta_graph(lengths: Sequence[int]) -> Graph:
    """Two poles (vertices 0 and 1) joined by internally disjoint paths of the given edge lengths."""
    if len(lengths) < 2 or min(lengths) < 1:
        raise ValueError("need at least two paths of positive length")
    edges = []
    nv = 2
    for length in lengths:
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, nv))
            prev = nv
            nv += 1
        edges.append((prev, 1))
    return Graph(nv, edges)


def parse_graph_spec(spec: str) -> Graph:
    """``cycle:N``, ``theta:a,b,c``, ``complete:N`` or a file path."""
    kind, _, arg = spec.partition(":")
    if kind == "cycle" and arg:
        return cycle_graph(int(arg))
    if kind == "theta" and arg:
        return theta_graph([int(a) for a in arg.split(",")])
    if kind == "complete" and arg:
        return complete_graph(int(arg))
    return Graph.load(spec)


# ---------------------------------------------------------------- traversal
@dataclass
class BfsTree:
    root: int
    levels: list[list[int]]
    dist: dict[int, int]
    parent_edge: dict[int, int]
    tree_edges: list[int]
    chords: list[int]
    unreached: list[int]
    order: list[int] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def width(self) -> int:
        return max(len(level) for level in self.levels)


def bfs_tree(g: Graph, root: int) -> BfsTree:
    """Deterministic BFS: neighbours expanded in ascending vertex (then edge) order."""
    dist = {root: 0}
    parent_edge: dict[int, int] = {}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, e in g.adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                parent_edge[v] = e
                order.append(v)
                queue.append(v)
    levels: list[list[int]] = [[] for _ in range(max(dist.values()) + 1)]
    for v, d in dist.items():
        levels[d].append(v)
    for level in levels:
        level.sort()
    tree = sorted(parent_edge.values())
    tree_set = set(tree)
    chords = [e for e, (u, v) in enumerate(g.edges) if e not in tree_set and u in dist]
    unreached = [v for v in range(g.num_vertices) if v not in dist]
    return BfsTree(root, levels, dist, parent_edge, tree, chords, unreached, order)


def girth(g: Graph) -> float:
    """Length of the shortest cycle (2 for parallel edges, 1 for a loop); ``inf`` for forests."""
    if g.has_self_loop():
        return 1
    best = INF
    for root in range(g.num_vertices):
        dist = {root: 0}
        via = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v, e in g.adj[u]:
                if e == via[u]:
                    continue
                if v not in dist:
                    dist[v] = dist[u] + 1
                    via[v] = e
                    queue.append(v)
                else:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def shortest_distance(g: Graph, s: int, t: int) -> float:
    tree = bfs_tree(g, s)
    return tree.dist.get(t, INF)


def distance_after_removal(g: Graph, vs: int, vt: int) -> float:
    """Distance between ``vs`` and ``vt`` once their (lowest-index) edge is removed."""
    ids = g.edge_ids(vs, vt)
    if not ids:
        raise EdgeMissing(f"({vs}, {vt}) is not an edge")
    return shortest_distance(g.without_edge(ids[0]), vs, vt)


def fundamental_cycles(g: Graph, root: int = 0) -> list[tuple[int, int]]:
    """``(chord, edge-bitmask)`` for each chord of the BFS spanning tree."""
    tree = bfs_tree(g, root)
    out = []
    for c in tree.chords:
        u, v = g.edges[c]
        mask = 1 << c
        a, b = u, v
        while tree.dist[a] > tree.dist[b]:
            mask ^= 1 << tree.parent_edge[a]
            a = _parent(g, tree, a)
        while tree.dist[b] > tree.dist[a]:
            mask ^= 1 << tree.parent_edge[b]
            b = _parent(g, tree, b)
        while a != b:
            mask ^= 1 << tree.parent_edge[a]
            mask ^= 1 << tree.parent_edge[b]
            a, b = _parent(g, tree, a), _parent(g, tree, b)
        out.append((c, mask))
    return out


def _parent(g: Graph, tree: BfsTree, v: int) -> int:
    u, w = g.edges[tree.parent_edge[v]]
    return w if u == v else u


# ---------------------------------------------------------------- Tanner graphs
@dataclass(frozen=True)
class TannerGraph:
    n: int
    z_checks: tuple[int, ...]
    x_checks: tuple[int, ...]

    @classmethod
    def from_code(cls, code: CssCode) -> TannerGraph:
        return cls(code.n, tuple(code.hz), tuple(code.hx))

    def checks(self, side: str) -> tuple[int, ...]:
        side = side.upper()
        if side not in ("Z", "X"):
            raise ValueError("side must be 'Z' or 'X'")
        return self.z_checks if side == "Z" else self.x_checks

    def edges(self) -> list[tuple[str, int, int]]:
        """``(type, check index, qubit)`` incidences."""
        out = []
        for kind, rows in (("Z", self.z_checks), ("X", self.x_checks)):
            for i, r in enumerate(rows):
                out.extend((kind, i, q) for q in iter_bits(r))
        return out


@dataclass(frozen=True)
class CollapseGraph:
    side: str
    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    error: int = 0

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def components(self) -> list[list[int]]:
        parent = {v: v for v in self.vertices}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in self.edges:
            parent[find(a)] = find(b)
        groups: dict[int, list[int]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())


def qubit_side_collapse(t: TannerGraph, side: str) -> CollapseGraph:
    """Checks of one type, adjacent when they share a qubit."""
    return collapse_with_respect_to(t, side, 0)


def collapse_with_respect_to(t: TannerGraph, side: str, error: int | Sequence[int]) -> CollapseGraph:
    """Collapse where every qubit in ``supp(error)`` is merged into one super node.

    Two checks are adjacent when they share a qubit, or when both touch the
    support of ``error``.
    """
    if not isinstance(error, int):
        bits = list(error)
        if len(bits) != t.n:
            raise ValueError(f"error vector has length {len(bits)}, expected {t.n}")
        error = sum(int(b) << q for q, b in enumerate(bits))
    rows = t.checks(side)
    edges = set()
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if rows[i] & rows[j] or (rows[i] & error and rows[j] & error):
                edges.add((i, j))
    return CollapseGraph(side.upper(), tuple(range(len(rows))), frozenset(edges), error)


# ---------------------------------------------------------------- equivalence classes
@dataclass(frozen=True)
class EquivalenceClasses:
    blocks: tuple[tuple[int, ...], ...]
    is_stabilizer_class: tuple[bool, ...]

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def square_sum(self) -> int:
        return sum(len(b) ** 2 for b in self.blocks)


def partition_equivalence_classes(code: CssCode, h: PauliHamiltonian) -> EquivalenceClasses:
    """Group Pauli terms whose pairwise products lie in the stabilizer group (sign ignored).

    Each term is reduced modulo the stabilizer row space; equal residues
    share a class, and a zero residue marks a class of stabilizer elements.
    """
    basis = ReducedBasis(s.symplectic for s in code.stabilizers)
    classes: dict[int, list[int]] = {}
    for j, (_, p) in enumerate(h.terms):
        classes.setdefault(basis.reduce(p.symplectic), []).append(j)
    blocks = sorted(classes.items(), key=lambda kv: kv[1][0])
    return EquivalenceClasses(tuple(tuple(b) for _, b in blocks), tuple(r == 0 for r, _ in blocks))


# ---------------------------------------------------------------- expansion profile
@dataclass
class ExpansionProfile:
    """Lower envelopes of operator weight against generator count.

    ``envelope`` uses the minimal generator count over every combination
    giving the same operator; ``raw_envelope`` uses the count of the
    combination as enumerated.
    """

    envelope: dict[int, int]
    raw_envelope: dict[int, int]
    exhaustive: bool
    samples: int

    def to_csv(self) -> str:
        lines = ["generator_count,min_weight,exhaustive_flag"]
        for count in sorted(self.envelope):
            lines.append(f"{count},{self.envelope[count]},{int(self.exhaustive)}")
        return "\n".join(lines) + "\n"


def _min_count_in_coset(mask: int, cycles: Sequence[int]) -> int:
    best = mask.bit_count()
    for sub in range(1, 1 << len(cycles)):
        c = mask
        for i in iter_bits(sub):
            c ^= cycles[i]
        best = min(best, c.bit_count())
    return best


def expansion_profile(
    code: CssCode,
    side: str = "systolic",
    budget: int = 1 << 20,
    samples: int = 4096,
    seed: int = 0,
) -> ExpansionProfile:
    """Weight of products of check generators as a function of how many are multiplied.

    ``side`` selects the Z checks (``"systolic"`` or ``"Z"``) or the X checks
    (``"cosystolic"`` or ``"X"``). All ``2**s`` combinations are enumerated in
    Gray-code order when that fits in ``budget``; otherwise ``samples``
    uniform combinations are drawn and the profile is flagged non-exhaustive.
    """
    key = side.lower()
    if key in ("systolic", "z"):
        rows = list(code.hz)
    elif key in ("cosystolic", "x"):
        rows = list(code.hx)
    else:
        raise ValueError("side must be systolic/Z or cosystolic/X")
    s = len(rows)
    # generator subsets multiplying to the identity
    cycles = kernel([sum(((r >> q) & 1) << i for i, r in enumerate(rows)) for q in range(code.n)], s)
    if len(cycles) > 16:
        cycles = cycles[:16]
    envelope: dict[int, int] = {}
    raw: dict[int, int] = {}

    def record(mask: int, op: int) -> None:
        w = op.bit_count()
        cnt = mask.bit_count()
        raw[cnt] = min(raw.get(cnt, w), w)
        best = _min_count_in_coset(mask, cycles)
        envelope[best] = min(envelope.get(best, w), w)

    exhaustive = (1 << s) <= budget
    if exhaustive:
        op = mask = 0
        record(0, 0)
        for i in range(1, 1 << s):
            flip = (i & -i).bit_length() - 1
            mask ^= 1 << flip
            op ^= rows[flip]
            record(mask, op)
        count = 1 << s
    else:
        rng = np.random.default_rng(seed)
        record(0, 0)
        for _ in range(samples):
            bits = rng.integers(0, 2, s)
            mask = op = 0
            for i in np.flatnonzero(bits):
                mask |= 1 << int(i)
                op ^= rows[int(i)]
            record(mask, op)
        count = samples + 1
    return ExpansionProfile(dict(sorted(envelope.items())), dict(sorted(raw.items())), exhaustive, count)
