"""Lightcones of layered circuits and the shallow-circuit QFI bound.

A depth-``t`` circuit of ``kappa``-local gates spreads any operator over at
most ``g(kappa, t)`` times as many qubits, so a state it prepares from a
product state has ``F <= m K^2 g(kappa, 2t)``. The verifier below samples
random Clifford circuits and checks that bound exactly.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .clifford import Clifford, Gate, apply_circuit, check_disjoint, cnot, random_clifford
from .errors import BoundViolation
from .hamiltonian import PauliHamiltonian, validate_k_local
from .pauli import iter_bits
from .qfi import qfi_stabilizer
from .state import StabilizerState


@dataclass(frozen=True)
class ConnectivityModel:
    """``kind`` is ``"all_to_all"`` or ``"grid"``; grids have dimension ``r``.

    ``shape`` gives the grid side lengths when circuits are generated on an
    ``r = 2`` lattice (row-major qubit order).
    """

    kind: str = "grid"
    kappa: int = 2
    r: int = 1
    shape: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("all_to_all", "grid"):
            raise ValueError(f"unknown connectivity {self.kind!r}")
        if self.kappa < 2:
            raise ValueError("kappa must be at least 2")
        if self.r < 1:
            raise ValueError("grid dimension must be at least 1")


def g_function(model: ConnectivityModel, t: int) -> int:
    """Operator diffusion bound: ``kappa**t`` or ``(2 (kappa - 1) t + 1)**r``."""
    if t < 0:
        raise ValueError("depth must be non-negative")
    if model.kind == "all_to_all":
        return model.kappa**t
    return (2 * (model.kappa - 1) * t + 1) ** model.r


def theorem1_bound(m: int, K: int, model: ConnectivityModel, t: int) -> int:
    """``m K^2 g(kappa, 2t)``."""
    if m < 0 or K < 0:
        raise ValueError("m and K must be non-negative")
    return m * K * K * g_function(model, 2 * t)


class LayeredCircuit:
    def __init__(self, n: int, layers: Iterable[Sequence[Gate]], kappa: int | None = None) -> None:
        self.n = n
        self.layers: list[list[Gate]] = [list(layer) for layer in layers]
        for layer in self.layers:
            check_disjoint(layer)
            for gate in layer:
                if any(not 0 <= q < n for q in gate.qubits):
                    raise ValueError(f"gate on {gate.qubits} outside {n} qubits")
                if kappa is not None and len(gate.qubits) > kappa:
                    raise ValueError(f"gate on {len(gate.qubits)} qubits exceeds kappa={kappa}")

    @property
    def depth(self) -> int:
        return len(self.layers)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LayeredCircuit) and self.n == other.n and self.layers == other.layers

    def prepare(self, state: StabilizerState | None = None) -> StabilizerState:
        return apply_circuit(StabilizerState.zero(self.n) if state is None else state, self.layers)

    def block_masks(self) -> list[list[int]]:
        return [[sum(1 << q for q in g.qubits) for g in layer] for layer in self.layers]


def lightcone(circuit: LayeredCircuit, initial: Iterable[int], direction: str = "backward") -> frozenset[int]:
    """Qubits reachable from ``initial`` by absorbing every gate block that touches the set.

    ``"forward"`` walks the layers in time order; ``"backward"`` walks them
    in reverse (the support of the Heisenberg-evolved operator).
    """
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    cur = 0
    for q in initial:
        if not 0 <= q < circuit.n:
            raise ValueError(f"qubit {q} outside 0..{circuit.n - 1}")
        cur |= 1 << q
    layers = circuit.block_masks()
    if direction == "backward":
        layers = layers[::-1]
    for layer in layers:
        grown = cur
        for block in layer:
            if block & cur:
                grown |= block
        cur = grown
    return frozenset(iter_bits(cur))


def correlation_prune_pairs(circuit: LayeredCircuit, h: PauliHamiltonian) -> set[tuple[int, int]]:
    """Local-term pairs ``(j, k)``, ``j < k``, whose correlation vanishes on ``circuit |0...0>``.

    ``<H_j H_k> = <0| U^dag H_j U U^dag H_k U |0>`` factorizes on the product
    state when the Heisenberg-evolved supports are disjoint, so the pruning
    uses backward lightcones.
    """
    cones = []
    for word in h.group_supports:
        cones.append(sum(1 << q for q in lightcone(circuit, iter_bits(word), "backward")))
    out = set()
    for j in range(len(cones)):
        for k in range(j + 1, len(cones)):
            if not cones[j] & cones[k]:
                out.add((j, k))
    return out


def brickwork_pairs(n: int, layer_index: int) -> list[tuple[int, int]]:
    """Pairs of 1D brickwork layer ``layer_index`` (0-based: even layers start at qubit 0)."""
    start = layer_index % 2
    return [(q, q + 1) for q in range(start, n - 1, 2)]


def _grid_blocks(shape: tuple[int, int], layer_index: int) -> list[tuple[int, ...]]:
    """2x2 blocks on a row-major grid, offset by one site on alternate layers."""
    rows, cols = shape
    off = layer_index % 2
    blocks = []
    for i in range(off, rows - 1, 2):
        for j in range(off, cols - 1, 2):
            a = i * cols + j
            blocks.append((a, a + 1, a + cols, a + cols + 1))
    return blocks


def random_clifford_circuit(n: int, t: int, model: ConnectivityModel, seed: int) -> LayeredCircuit:
    """Depth-``t`` circuit of uniformly random two-qubit Cliffords.

    1D grids use brickwork pairing, all-to-all uses a fresh random perfect
    matching per layer, and 2D grids use alternating 2x2 blocks (each block
    applies random Cliffords on its two rows, then on its two columns).
    """
    if model.kappa != 2:
        raise ValueError("random circuits are generated for kappa = 2 only")
    rng = np.random.default_rng(seed)
    layers = []
    for layer_index in range(t):
        layer: list[Gate] = []
        if model.kind == "all_to_all":
            order = rng.permutation(n)
            pairs = [(int(a), int(b)) for a, b in zip(order[0::2], order[1::2])]
            layer = [Gate.of(random_clifford(2, rng), a, b) for a, b in pairs]
        elif model.r == 1:
            layer = [Gate.of(random_clifford(2, rng), a, b) for a, b in brickwork_pairs(n, layer_index)]
        elif model.r == 2:
            if model.shape is None or model.shape[0] * model.shape[1] != n:
                raise ValueError("2D grids need shape with rows * cols == n")
            for a, b, c, d in _grid_blocks(tuple(model.shape), layer_index):
                ops = tuple(
                    (random_clifford(2, rng), pair) for pair in ((a, b), (c, d), (a, c), (b, d))
                )
                layer.append(Gate((a, b, c, d), ops))
        else:
            raise ValueError("random grid circuits are implemented for r = 1 and r = 2")
        layers.append(layer)
    return LayeredCircuit(n, layers)


def ghz_circuit(n: int) -> LayeredCircuit:
    """Depth ``ceil(log2 n)`` preparation of GHZ_n by doubling the entangled block."""
    if n < 2:
        raise ValueError("GHZ needs n >= 2")
    first = Gate((0, 1), ((Clifford.named("H"), (0,)), (Clifford.named("CNOT"), (0, 1))))
    layers = [[first]]
    size = 2
    while size < n:
        layers.append([cnot(q, q + size) for q in range(size) if q + size < n])
        size *= 2
    return LayeredCircuit(n, layers)


@dataclass
class Theorem1Report:
    bound: int
    max_qfi: float
    max_ratio: float
    trials: int
    violations: int
    values: list[float]

    def to_json(self) -> dict:
        return {"bound": self.bound, "max_qfi": self.max_qfi, "max_ratio": self.max_ratio,
                "trials": self.trials, "violations": self.violations}


def _trial(args: tuple) -> float:
    n, t, model, h, seed = args
    circuit = random_clifford_circuit(n, t, model, seed)
    return qfi_stabilizer(circuit.prepare(), h, matrix_threshold=0).value


def verify_theorem1(
    n: int,
    t: int,
    model: ConnectivityModel,
    h: PauliHamiltonian,
    trials: int,
    seed: int,
    jobs: int = 1,
    raise_on_violation: bool = True,
) -> Theorem1Report:
    """QFI of ``trials`` random depth-``t`` circuit states against the shallow-circuit bound.

    Trial ``i`` uses seed ``seed + i``, so serial and parallel runs agree.
    """
    prof = validate_k_local(h)
    bound = theorem1_bound(prof.m, prof.K, model, t)
    args = [(n, t, model, h, seed + i) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_trial, args, chunksize=max(1, trials // (4 * jobs))))
    else:
        values = [_trial(a) for a in args]
    violations = sum(v > bound + 1e-9 for v in values)
    if violations and raise_on_violation:
        raise BoundViolation(f"{violations} of {trials} trials exceed the bound {bound}")
    max_qfi = max(values, default=0.0)
    ratio = max_qfi / bound if bound else 0.0
    return Theorem1Report(bound, max_qfi, ratio, trials, violations, values)
