"""GF(2) linear algebra on rows packed into Python ints."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .pauli import bits_to_int, int_to_bits


class ReducedBasis:
    """Incrementally built, fully reduced echelon basis.

    Each stored row has a pivot (its lowest set bit) that is clear in every
    other row, so reducing a vector is a single pass over the pivots it hits.
    """

    def __init__(self, rows: Iterable[int] = ()) -> None:
        self._rows: dict[int, int] = {}
        for row in rows:
            self.add(row)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> list[int]:
        return [self._rows[p] for p in sorted(self._rows)]

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def reduce(self, vec: int) -> int:
        for pivot, row in self._rows.items():
            if (vec >> pivot) & 1:
                vec ^= row
        return vec

    def contains(self, vec: int) -> bool:
        return self.reduce(vec) == 0

    def add(self, vec: int) -> bool:
        """Insert ``vec``; return False when it was already in the span."""
        vec = self.reduce(vec)
        if vec == 0:
            return False
        pivot = (vec & -vec).bit_length() - 1
        for p, row in self._rows.items():
            if (row >> pivot) & 1:
                self._rows[p] = row ^ vec
        self._rows[pivot] = vec
        return True

    def copy(self) -> ReducedBasis:
        other = ReducedBasis()
        other._rows = dict(self._rows)
        return other


def rank(rows: Iterable[int]) -> int:
    return len(ReducedBasis(rows))


def independent_subset(rows: Sequence[int]) -> list[int]:
    """Indices of a maximal independent subset, greedily in input order."""
    basis = ReducedBasis()
    return [i for i, row in enumerate(rows) if basis.add(row)]


def kernel(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of ``{v : popcount(row & v) even for every row}``."""
    basis = ReducedBasis(rows)
    pivot_rows = {p: basis._rows[p] for p in basis.pivots}
    out = []
    for free in range(ncols):
        if free in pivot_rows:
            continue
        vec = 1 << free
        for p, row in pivot_rows.items():
            if (row >> free) & 1:
                vec |= 1 << p
        out.append(vec)
    return out


def dot(a: int, b: int) -> int:
    return (a & b).bit_count() & 1


def inverse(matrix: Sequence[int], size: int) -> list[int]:
    """Inverse of a ``size x size`` matrix given as row ints.

    Raises ``ValueError`` when the matrix is singular.
    """
    aug = [row | (1 << (size + i)) for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if (aug[r] >> col) & 1), None)
        if pivot is None:
            raise ValueError("matrix is singular over GF(2)")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(size):
            if r != col and (aug[r] >> col) & 1:
                aug[r] ^= aug[col]
    return [row >> size for row in aug]


def transpose(rows: Sequence[int], ncols: int) -> list[int]:
    """Column words of the matrix with the given row words."""
    if not rows:
        return [0] * ncols
    bits = np.array([int_to_bits(r, ncols) for r in rows], dtype=np.uint8)
    packed = np.packbits(bits.T, axis=1, bitorder="little")
    return [int.from_bytes(col.tobytes(), "little") for col in packed]


def rows_from_matrix(matrix: np.ndarray | Sequence[Sequence[int]]) -> list[int]:
    arr = np.asarray(matrix, dtype=np.uint8)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D binary matrix")
    return [bits_to_int(row % 2) for row in arr]


def matrix_from_rows(rows: Sequence[int], ncols: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, ncols), dtype=np.uint8)
    return np.stack([int_to_bits(r, ncols) for r in rows])


def weight_key(vec: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: weight first, then the sorted support (earliest qubits first)."""
    bits = []
    v = vec
    while v:
        low = v & -v
        bits.append(low.bit_length() - 1)
        v ^= low
    return (len(bits), tuple(bits))


def reduce_weight(vec: int, generators: Sequence[int]) -> int:
    """Greedy descent: multiply by generators while the weight strictly drops."""
    improved = True
    while improved:
        improved = False
        for g in generators:
            cand = vec ^ g
            if weight_key(cand) < weight_key(vec):
                vec = cand
                improved = True
    return vec
