"""Small Clifford gates and their action on stabilizer tableaux.

A :class:`Clifford` is a word over the generators H, S and CNOT acting on
one or two local qubits. Its conjugation action is tabulated once: for each
of the ``4**k`` local letter patterns ``X**x Z**z`` the table stores the
image pattern and the phase picked up. Applying a gate to a whole tableau is
then a single fancy-indexing pass over the affected columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache, cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import OverlappingSupports
from .pauli import PauliOperator, iter_bits
from .state import StabilizerState

Word = tuple[tuple[str, tuple[int, ...]], ...]


def _p(n: int, x: int, z: int, phase: int = 0) -> PauliOperator:
    return PauliOperator(n, x, z, phase)


# images of (X_q, Z_q) for every local qubit of the elementary gate
_ELEMENTARY: dict[str, list[tuple[PauliOperator, PauliOperator]]] = {
    "H": [(_p(1, 0, 1), _p(1, 1, 0))],
    "S": [(_p(1, 1, 1, 1), _p(1, 0, 1))],
    "CNOT": [
        (_p(2, 0b11, 0), _p(2, 0, 0b01)),
        (_p(2, 0b10, 0), _p(2, 0, 0b11)),
    ],
}
ELEMENTARY_ARITY = {"H": 1, "S": 1, "CNOT": 2}

# convenience gates as words over the elementary set (local qubit labels)
NAMED_WORDS: dict[str, tuple[int, Word]] = {
    "I": (1, ()),
    "H": (1, (("H", (0,)),)),
    "S": (1, (("S", (0,)),)),
    "SDG": (1, (("S", (0,)),) * 3),
    "Z": (1, (("S", (0,)),) * 2),
    "X": (1, (("H", (0,)), ("S", (0,)), ("S", (0,)), ("H", (0,)))),
    "Y": (1, (("S", (0,)), ("S", (0,)), ("H", (0,)), ("S", (0,)), ("S", (0,)), ("H", (0,)))),
    "CNOT": (2, (("CNOT", (0, 1)),)),
    "CZ": (2, (("H", (1,)), ("CNOT", (0, 1)), ("H", (1,)))),
    "SWAP": (2, (("CNOT", (0, 1)), ("CNOT", (1, 0)), ("CNOT", (0, 1)))),
}


def conjugate(p: PauliOperator, images: Sequence[tuple[PauliOperator, PauliOperator]]) -> PauliOperator:
    """``U p U^dagger`` given the images of every ``X_q`` and ``Z_q`` under ``U``."""
    acc = PauliOperator(p.n, 0, 0, p.phase)
    for q in iter_bits(p.x):
        acc = acc * images[q][0]
    for q in iter_bits(p.z):
        acc = acc * images[q][1]
    return acc


def _embedded_images(k: int, name: str, local: tuple[int, ...]) -> list[tuple[PauliOperator, PauliOperator]]:
    images = [(_p(k, 1 << q, 0), _p(k, 0, 1 << q)) for q in range(k)]
    for a, q in enumerate(local):
        for slot in (0, 1):
            src = _ELEMENTARY[name][a][slot]
            x = z = 0
            for b, qq in enumerate(local):
                x |= ((src.x >> b) & 1) << qq
                z |= ((src.z >> b) & 1) << qq
            if slot == 0:
                images[q] = (_p(k, x, z, src.phase), images[q][1])
            else:
                images[q] = (images[q][0], _p(k, x, z, src.phase))
    return images


@dataclass(frozen=True)
class Clifford:
    """A ``k``-qubit Clifford unitary given as a time-ordered elementary word."""

    k: int
    word: Word = ()

    def __post_init__(self) -> None:
        if self.k not in (1, 2):
            raise ValueError("only 1- and 2-qubit Cliffords are supported")
        for name, local in self.word:
            if name not in _ELEMENTARY or len(local) != ELEMENTARY_ARITY[name]:
                raise ValueError(f"bad elementary gate {name}{local}")
            if any(not 0 <= q < self.k for q in local) or len(set(local)) != len(local):
                raise ValueError(f"bad local qubits {local} for a {self.k}-qubit gate")

    @classmethod
    def named(cls, name: str) -> Clifford:
        k, word = NAMED_WORDS[name.upper()]
        return cls(k, word)

    @cached_property
    def images(self) -> list[tuple[PauliOperator, PauliOperator]]:
        k = self.k
        current = [(_p(k, 1 << q, 0), _p(k, 0, 1 << q)) for q in range(k)]
        for name, local in self.word:
            step = _embedded_images(k, name, local)
            current = [(conjugate(ix, step), conjugate(iz, step)) for ix, iz in current]
        return current

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        return conjugate(p, self.images)

    @cached_property
    def table(self) -> tuple[np.ndarray, np.ndarray]:
        """``(out_pattern, phase_delta)`` indexed by local pattern.

        Pattern bit ``2l`` is the x-bit and ``2l+1`` the z-bit of local qubit ``l``.
        """
        size = 4**self.k
        out = np.zeros(size, dtype=np.uint8)
        dph = np.zeros(size, dtype=np.uint8)
        for pat in range(size):
            x = z = 0
            for l in range(self.k):
                x |= ((pat >> (2 * l)) & 1) << l
                z |= ((pat >> (2 * l + 1)) & 1) << l
            img = self.conjugate(_p(self.k, x, z, 0))
            o = 0
            for l in range(self.k):
                o |= ((img.x >> l) & 1) << (2 * l)
                o |= ((img.z >> l) & 1) << (2 * l + 1)
            out[pat] = o
            dph[pat] = img.phase
        return out, dph

    def key(self) -> tuple:
        return tuple((ix.x, ix.z, ix.phase, iz.x, iz.z, iz.phase) for ix, iz in self.images)


_GROUP_GENERATORS: dict[int, Word] = {
    1: (("H", (0,)), ("S", (0,))),
    2: (("H", (0,)), ("H", (1,)), ("S", (0,)), ("S", (1,)), ("CNOT", (0, 1))),
}


@cache
def clifford_group(k: int) -> tuple[Clifford, ...]:
    """Every ``k``-qubit Clifford modulo global phase, each as a shortest word.

    Breadth-first search over words in the elementary generators; two words
    are identified when they conjugate every Pauli identically (signs
    included). There are 24 elements for ``k=1`` and 11520 for ``k=2``.
    """
    gens = _GROUP_GENERATORS[k]
    steps = [_embedded_images(k, name, local) for name, local in gens]
    start = Clifford(k, ())
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for c in frontier:
            for g, step in zip(gens, steps):
                imgs = [(conjugate(ix, step), conjugate(iz, step)) for ix, iz in c.images]
                key = tuple((ix.x, ix.z, ix.phase, iz.x, iz.z, iz.phase) for ix, iz in imgs)
                if key not in seen:
                    new = Clifford(k, c.word + (g,))
                    new.__dict__["images"] = imgs
                    seen[key] = new
                    nxt.append(new)
        frontier = nxt
    return tuple(seen.values())


def two_qubit_cliffords() -> tuple[Clifford, ...]:
    return clifford_group(2)


def random_clifford(k: int, rng: np.random.Generator) -> Clifford:
    """Uniformly random element of the ``k``-qubit Clifford group."""
    group = clifford_group(k)
    return group[int(rng.integers(len(group)))]


def random_two_qubit_clifford(rng: np.random.Generator) -> Clifford:
    return random_clifford(2, rng)


@dataclass(frozen=True)
class Gate:
    """A block of Clifford operations supported on ``qubits``.

    ``ops`` holds ``(Clifford, global_qubits)`` pairs applied in order; every
    operation must stay inside ``qubits``. A plain 1- or 2-qubit gate is a
    block with one operation.
    """

    qubits: tuple[int, ...]
    ops: tuple[tuple[Clifford, tuple[int, ...]], ...] = field(default=())

    def __post_init__(self) -> None:
        allowed = set(self.qubits)
        if len(allowed) != len(self.qubits):
            raise ValueError("repeated qubit in gate support")
        for cliff, qs in self.ops:
            if len(qs) != cliff.k or not set(qs) <= allowed:
                raise ValueError(f"operation on {qs} leaves gate support {self.qubits}")

    @classmethod
    def of(cls, cliff: Clifford, *qubits: int) -> Gate:
        return cls(tuple(qubits), ((cliff, tuple(qubits)),))


def h(q: int) -> Gate:
    return Gate.of(Clifford.named("H"), q)


def s(q: int) -> Gate:
    return Gate.of(Clifford.named("S"), q)


def cnot(control: int, target: int) -> Gate:
    return Gate.of(Clifford.named("CNOT"), control, target)


def cz(a: int, b: int) -> Gate:
    return Gate.of(Clifford.named("CZ"), a, b)


def check_disjoint(layer: Iterable[Gate]) -> None:
    used: set[int] = set()
    for gate in layer:
        overlap = used.intersection(gate.qubits)
        if overlap:
            raise OverlappingSupports(f"qubits {sorted(overlap)} used twice in one layer")
        used.update(gate.qubits)


class Tableau:
    """Mutable bit-array view of a list of Paulis, used while applying gates."""

    def __init__(self, paulis: Sequence[PauliOperator]) -> None:
        self.n = paulis[0].n
        n = self.n
        self.xs = np.array([[(p.x >> q) & 1 for q in range(n)] for p in paulis], dtype=np.uint8)
        self.zs = np.array([[(p.z >> q) & 1 for q in range(n)] for p in paulis], dtype=np.uint8)
        self.ph = np.array([p.phase for p in paulis], dtype=np.uint8)

    def apply(self, cliff: Clifford, qubits: Sequence[int]) -> None:
        out, dph = cliff.table
        pat = np.zeros(len(self.ph), dtype=np.uint8)
        for l, q in enumerate(qubits):
            pat |= self.xs[:, q] << (2 * l)
            pat |= self.zs[:, q] << (2 * l + 1)
        res = out[pat]
        for l, q in enumerate(qubits):
            self.xs[:, q] = (res >> (2 * l)) & 1
            self.zs[:, q] = (res >> (2 * l + 1)) & 1
        self.ph = (self.ph + dph[pat]) % 4

    def paulis(self) -> list[PauliOperator]:
        weights = 1 << np.arange(self.n, dtype=object)
        out = []
        for xr, zr, ph in zip(self.xs, self.zs, self.ph):
            x = int(np.dot(xr.astype(object), weights)) if self.n else 0
            z = int(np.dot(zr.astype(object), weights)) if self.n else 0
            out.append(PauliOperator(self.n, x, z, int(ph)))
        return out


def apply_circuit(state: StabilizerState, layers: Iterable[Sequence[Gate]]) -> StabilizerState:
    """Conjugate every generator through the layers in time order."""
    tab = Tableau(state.generators)
    for layer in layers:
        check_disjoint(layer)
        for gate in layer:
            for cliff, qs in gate.ops:
                if max(qs) >= state.n:
                    raise ValueError(f"gate on {qs} outside {state.n} qubits")
                tab.apply(cliff, qs)
    return StabilizerState(tab.paulis(), check=False)


def apply_clifford_layer(state: StabilizerState, layer: Sequence[Gate]) -> StabilizerState:
    """One layer of gates with pairwise disjoint supports."""
    return apply_circuit(state, [layer])


def random_stabilizer_state(n: int, rng: np.random.Generator, depth: int | None = None) -> StabilizerState:
    """Random stabilizer state from layers of random Cliffords on random pairs.

    Not exactly uniform over stabilizer states, but every state is reachable
    and depth ``2n`` scrambles well enough for oracle tests.
    """
    depth = 2 * n if depth is None else depth
    state = StabilizerState.zero(n)
    layers = [[Gate.of(random_clifford(1, rng), q) for q in range(n)]]
    for _ in range(depth):
        order = rng.permutation(n)
        layer = [Gate.of(random_clifford(2, rng), int(a), int(b)) for a, b in zip(order[0::2], order[1::2])]
        if n % 2:
            layer.append(Gate.of(random_clifford(1, rng), int(order[-1])))
        layers.append(layer)
    return apply_circuit(state, layers)
