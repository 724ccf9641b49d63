"""Pauli-sum Hamiltonians with locality bookkeeping.

A Hamiltonian is a list of ``(coeff, pauli)`` terms. Terms may carry a group
label; each group is one local term ``H_j`` whose support, degree and norm
enter the locality profile. Without labels every Pauli is its own group.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NonHermitian
from .pauli import PauliOperator, format_pauli, iter_bits, parse_pauli

DENSE_NORM_QUBITS = 10


@dataclass(frozen=True)
class LocalityProfile:
    K_support: int
    K_degree: int
    m: int

    @property
    def K(self) -> int:
        return max(self.K_support, self.K_degree)


class PauliHamiltonian:
    def __init__(
        self,
        n: int,
        terms: Iterable[tuple[float, PauliOperator]],
        groups: Sequence[int] | None = None,
    ) -> None:
        self.n = n
        self.terms: tuple[tuple[float, PauliOperator], ...] = tuple((float(c), p) for c, p in terms)
        for c, p in self.terms:
            if p.n != n:
                raise DimensionMismatch(f"{p.n}-qubit term in a {n}-qubit Hamiltonian")
            if not p.is_hermitian:
                raise NonHermitian(f"term {format_pauli(p)} is not Hermitian")
            if p.is_identity:
                raise ValueError("identity terms are not allowed (local terms must be traceless)")
            if not np.isfinite(c):
                raise ValueError("coefficients must be finite reals")
        if groups is None:
            groups = range(len(self.terms))
        self.groups: tuple[int, ...] = tuple(int(g) for g in groups)
        if len(self.groups) != len(self.terms):
            raise ValueError("one group label per term is required")

    @classmethod
    def from_ops(cls, ops: Sequence[PauliOperator], coeffs: Sequence[float] | None = None) -> PauliHamiltonian:
        coeffs = [1.0] * len(ops) if coeffs is None else coeffs
        return cls(ops[0].n, zip(coeffs, ops))

    @classmethod
    def sum_z(cls, n: int) -> PauliHamiltonian:
        return cls(n, [(1.0, PauliOperator.single(n, q, "Z")) for q in range(n)])

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"PauliHamiltonian(n={self.n}, terms={len(self.terms)}, m={self.m})"

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms])

    @property
    def ops(self) -> list[PauliOperator]:
        return [p for _, p in self.terms]

    def scaled(self, a: float) -> PauliHamiltonian:
        return PauliHamiltonian(self.n, [(a * c, p) for c, p in self.terms], self.groups)

    @cached_property
    def group_members(self) -> dict[int, list[int]]:
        """Group label to term indices, in first-appearance order."""
        out: dict[int, list[int]] = {}
        for i, g in enumerate(self.groups):
            out.setdefault(g, []).append(i)
        return out

    @cached_property
    def group_supports(self) -> list[int]:
        out = []
        for members in self.group_members.values():
            word = 0
            for i in members:
                p = self.terms[i][1]
                word |= p.x | p.z
            out.append(word)
        return out

    @property
    def m(self) -> int:
        return len(self.group_members)

    def group_norms(self) -> list[float]:
        """Operator norm of each local term.

        Exact (dense spectral norm on the term's support) when the support
        has at most ``DENSE_NORM_QUBITS`` qubits, otherwise the triangle
        bound ``sum |coeff|``.
        """
        from .dense import pauli_matrix

        norms = []
        for members, word in zip(self.group_members.values(), self.group_supports):
            qubits = list(iter_bits(word))
            if len(members) == 1:
                norms.append(abs(self.terms[members[0]][0]))
            elif len(qubits) <= DENSE_NORM_QUBITS:
                mat = sum(self.terms[i][0] * pauli_matrix(self.terms[i][1].restricted(qubits)) for i in members)
                norms.append(float(np.max(np.abs(np.linalg.eigvalsh(mat)))))
            else:
                norms.append(float(sum(abs(self.terms[i][0]) for i in members)))
        return norms

    def require_bounded(self, tol: float = 1e-12) -> None:
        """Raise unless every local term has norm at most one."""
        for g, norm in zip(self.group_members, self.group_norms()):
            if norm > 1 + tol:
                raise ValueError(f"local term {g} has norm {norm:.6g} > 1")

    def to_json(self) -> dict:
        out = []
        for (c, p), g in zip(self.terms, self.groups):
            item = {"coeff": c, "pauli": format_pauli(p)}
            if self.groups != tuple(range(len(self.terms))):
                item["group"] = g
            out.append(item)
        return {"n": self.n, "terms": out}

    @classmethod
    def from_json(cls, data: dict) -> PauliHamiltonian:
        n = int(data["n"])
        terms, groups = [], []
        for i, item in enumerate(data["terms"]):
            p = parse_pauli(item["pauli"])
            if p.n != n:
                raise DimensionMismatch(f"term {item['pauli']!r} does not have {n} qubits")
            terms.append((float(item["coeff"]), p))
            groups.append(int(item.get("group", i)))
        return cls(n, terms, groups)


def validate_k_local(h: PauliHamiltonian) -> LocalityProfile:
    """Largest local-term support, largest per-qubit term count, and term count."""
    degree: dict[int, int] = defaultdict(int)
    k_support = 0
    for word in h.group_supports:
        k_support = max(k_support, word.bit_count())
        for q in iter_bits(word):
            degree[q] += 1
    return LocalityProfile(k_support, max(degree.values(), default=0), h.m)
