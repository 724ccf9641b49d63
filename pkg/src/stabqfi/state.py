"""Pure stabilizer states and exact Pauli expectation values."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CommutationViolation, DimensionMismatch, RankDeficient
from .gf2 import transpose
from .pauli import PauliOperator, anticommuting_pair, int_to_bits, iter_bits, require_hermitian

# decompositions using more generators than this go through the phase matrix
VECTOR_PHASE_MIN = 16


class StabilizerState:
    """The unique state with ``g|psi> = |psi>`` for each signed generator ``g``.

    Signs live in the generators' phases: ``-ZZ`` stabilizes the odd-parity
    Bell pair. ``signs`` exposes them as +/-1 for convenience.
    """

    def __init__(self, generators: Sequence[PauliOperator], check: bool = True) -> None:
        gens = tuple(generators)
        if not gens:
            raise RankDeficient("a stabilizer state needs at least one generator")
        n = gens[0].n
        if check:
            for g in gens:
                if g.n != n:
                    raise DimensionMismatch("generators act on different qubit counts")
                require_hermitian(g)
                if g.is_identity:
                    raise RankDeficient("identity is not an admissible generator")
            pair = anticommuting_pair(gens)
            if pair is not None:
                raise CommutationViolation(f"{gens[pair[0]]} and {gens[pair[1]]} anticommute")
            if len(gens) != n:
                raise RankDeficient(f"need {n} independent generators, got {len(gens)}")
        self.n = n
        self.generators = gens
        if check:
            # raises RankDeficient on dependent generators
            self._destab = _destabilizers(gens)

    @classmethod
    def from_signs(cls, generators: Iterable[PauliOperator], signs: Iterable[int]) -> StabilizerState:
        gens = [PauliOperator.hermitian(g.n, g.x, g.z, s) for g, s in zip(generators, signs)]
        return cls(gens)

    @classmethod
    def zero(cls, n: int) -> StabilizerState:
        """``|0...0>``."""
        return cls([PauliOperator.hermitian(n, 0, 1 << q) for q in range(n)], check=False)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if g.sign == 1 else -1 for g in self.generators)

    def __repr__(self) -> str:
        return f"StabilizerState({[str(g) for g in self.generators]})"

    # ---------------------------------------------------------- decomposition
    @cached_property
    def _tables(self) -> tuple[list[int], list[int], list[int], list[int]]:
        """Column bitsets for generators and destabilizers.

        ``gz[q]`` has bit ``i`` set when generator ``i`` carries a Z on qubit
        ``q``; likewise ``gx``, ``dz``, ``dx`` for destabilizers. With these,
        the symplectic products of a Pauli against every generator cost
        O(weight) word operations.
        """
        n = self.n
        destab = getattr(self, "_destab", None) or _destabilizers(self.generators)
        gx = transpose([g.x for g in self.generators], n)
        gz = transpose([g.z for g in self.generators], n)
        dx = transpose([x for x, _ in destab], n)
        dz = transpose([z for _, z in destab], n)
        return gx, gz, dx, dz

    def syndrome_and_coordinates(self, p: PauliOperator) -> tuple[int, int]:
        """Bitmasks of generators (resp. destabilizers) that anticommute with ``p``."""
        if p.n != self.n:
            raise DimensionMismatch(f"{p.n}-qubit operator on {self.n}-qubit state")
        gx, gz, dx, dz = self._tables
        syn = coord = 0
        for q in iter_bits(p.x):
            syn ^= gz[q]
            coord ^= dz[q]
        for q in iter_bits(p.z):
            syn ^= gx[q]
            coord ^= dx[q]
        return syn, coord

    @cached_property
    def _phase_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Generator phases and ``U[i, j] = |z_i & x_j| mod 2`` for ``i < j``.

        The ordered product of the generators indexed by a set ``c`` has
        phase ``sum(phase_i) + 2 * sum_{i<j in c} U[i, j]``.
        """
        xs = np.array([int_to_bits(g.x, self.n) for g in self.generators], dtype=np.int64)
        zs = np.array([int_to_bits(g.z, self.n) for g in self.generators], dtype=np.int64)
        upper = np.triu((zs @ xs.T) & 1, k=1)
        return np.array([g.phase for g in self.generators], dtype=np.int64), upper

    def stabilizer_phase(self, p: PauliOperator) -> int | None:
        """Exponent ``e`` with ``p = i**e * S`` for ``S`` in the signed stabilizer group.

        ``None`` when ``p`` is not proportional to a group element, in which
        case ``<psi|p|psi> = 0``. Otherwise ``<psi|p|psi> = i**e``; ``p`` need not
        be Hermitian.
        """
        syn, coord = self.syndrome_and_coordinates(p)
        if syn:
            return None
        if coord.bit_count() > VECTOR_PHASE_MIN:
            phases, upper = self._phase_tables
            idx = np.flatnonzero(int_to_bits(coord, self.n))
            aph = int(phases[idx].sum()) + 2 * int(upper[np.ix_(idx, idx)].sum())
            return (p.phase - aph) % 4
        ax = az = aph = 0
        gens = self.generators
        for i in iter_bits(coord):
            g = gens[i]
            aph += g.phase + 2 * (az & g.x).bit_count()
            ax ^= g.x
            az ^= g.z
        assert ax == p.x and az == p.z, "destabilizer decomposition failed"
        return (p.phase - aph) % 4

    def expectation(self, p: PauliOperator) -> int:
        """``<psi|p|psi>`` for a Hermitian Pauli: always -1, 0 or +1."""
        require_hermitian(p)
        e = self.stabilizer_phase(p)
        if e is None:
            return 0
        return 1 if e == 0 else -1

    def expectation_complex(self, p: PauliOperator) -> complex:
        e = self.stabilizer_phase(p)
        return 0j if e is None else 1j**e

    def same_state(self, other: StabilizerState) -> bool:
        if other.n != self.n:
            return False
        return all(other.expectation(g) == 1 for g in self.generators)


def _destabilizers(generators: Sequence[PauliOperator]) -> list[tuple[int, int]]:
    """Vectors ``d_i`` with symplectic product ``<d_i, g_j> = delta_ij``.

    Solves ``A d = e_i`` where row ``j`` of ``A`` is ``g_j`` with x and z
    swapped, by reducing ``A`` while tracking the row combinations.
    """
    n = generators[0].n
    mask = (1 << n) - 1
    rows = []
    for i, g in enumerate(generators):
        rows.append([g.z | (g.x << n), 1 << i])
    pivots = []
    rank = 0
    for col in range(2 * n):
        sel = next((r for r in range(rank, len(rows)) if (rows[r][0] >> col) & 1), None)
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        a, t = rows[rank]
        for r in range(len(rows)):
            if r != rank and (rows[r][0] >> col) & 1:
                rows[r][0] ^= a
                rows[r][1] ^= t
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    if rank != len(generators):
        raise RankDeficient("generators are dependent")
    out = []
    for i in range(len(generators)):
        vec = 0
        for r, p in enumerate(pivots):
            if (rows[r][1] >> i) & 1:
                vec |= 1 << p
        out.append((vec & mask, vec >> n))
    return out
