"""Stabilizer and CSS codes: logical operators, distance, code states."""

from __future__ import annotations

from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, CommutationViolation, DimensionMismatch, RankDeficient
from .gf2 import ReducedBasis, dot, independent_subset, inverse, kernel, rows_from_matrix
from .pauli import PauliOperator, anticommuting_pair, iter_bits, symplectic_product
from .state import StabilizerState

DEFAULT_BUDGET = 1 << 24

Vec = int  # symplectic vector x | z << n


def _swap(vec: Vec, n: int) -> Vec:
    mask = (1 << n) - 1
    return (vec >> n) | ((vec & mask) << n)


def _sp(a: Vec, b: Vec, n: int) -> int:
    return dot(a, _swap(b, n))


def pauli_weight_key(vec: Vec, n: int) -> tuple:
    mask = (1 << n) - 1
    supp = (vec & mask) | (vec >> n)
    return (supp.bit_count(), tuple(iter_bits(supp)), vec)


def _reduce_weight(vec: Vec, gens: Sequence[Vec], n: int) -> Vec:
    """Multiply by stabilizer rows while the Pauli weight key strictly drops."""
    improved = True
    while improved:
        improved = False
        for g in gens:
            cand = vec ^ g
            if pauli_weight_key(cand, n) < pauli_weight_key(vec, n):
                vec, improved = cand, True
    return vec


def _symplectic_pairs(cands: list[Vec], n: int) -> list[tuple[Vec, Vec]]:
    """Symplectic Gram-Schmidt on a basis of the normalizer modulo the stabilizer."""
    pool = list(cands)
    pairs = []
    while pool:
        a = pool.pop(0)
        idx = next((i for i, b in enumerate(pool) if _sp(a, b, n)), None)
        if idx is None:
            raise RankDeficient("logical candidates are not symplectic")
        b = pool.pop(idx)
        pool = [c ^ (b if _sp(c, a, n) else 0) ^ (a if _sp(c, b, n) else 0) for c in pool]
        pairs.append((a, b))
    return pairs


class StabilizerCode:
    """A stabilizer code given by (possibly redundant) Hermitian generators.

    ``logicals`` is a list of ``(X_l, Z_l)`` pairs; when omitted they are
    extracted by GF(2) linear algebra and reduced to low weight.
    """

    def __init__(
        self,
        stabilizers: Sequence[PauliOperator],
        logicals: Sequence[tuple[PauliOperator, PauliOperator]] | None = None,
        n: int | None = None,
    ) -> None:
        stabilizers = tuple(stabilizers)
        if n is None:
            if not stabilizers:
                raise ValueError("qubit count is required when there are no stabilizers")
            n = stabilizers[0].n
        self.n = n
        for s in stabilizers:
            if s.n != n:
                raise DimensionMismatch("stabilizers act on different qubit counts")
            if not s.is_hermitian:
                raise ValueError(f"stabilizer {s} is not Hermitian")
            if s.is_identity:
                raise ValueError("identity is not a valid stabilizer generator")
        pair = anticommuting_pair(stabilizers)
        if pair is not None:
            a, b = (stabilizers[i] for i in pair)
            raise CommutationViolation(f"stabilizers {a} and {b} anticommute")
        self.stabilizers = stabilizers
        self._basis = ReducedBasis(s.symplectic for s in stabilizers)
        self.rank = len(self._basis)
        self.k = n - self.rank
        if logicals is None:
            logicals = self._extract_logicals()
        self.logicals = tuple(logicals)
        self._check_logicals()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, k={self.k}, rank={self.rank})"

    # ------------------------------------------------------------ structure
    def in_stabilizer(self, p: PauliOperator) -> bool:
        """True when ``p`` equals a stabilizer group element up to sign."""
        return self._basis.contains(p.symplectic)

    def commutes_with_checks(self, p: PauliOperator) -> bool:
        return all(not symplectic_product(p, s) for s in self.stabilizers)

    def is_logical(self, p: PauliOperator) -> bool:
        return self.commutes_with_checks(p) and not self.in_stabilizer(p)

    @cached_property
    def independent_stabilizers(self) -> list[PauliOperator]:
        idx = independent_subset([s.symplectic for s in self.stabilizers])
        return [self.stabilizers[i] for i in idx]

    def _extract_logicals(self) -> list[tuple[PauliOperator, PauliOperator]]:
        n = self.n
        gens = [s.symplectic for s in self.stabilizers]
        normalizer = kernel([_swap(g, n) for g in gens], 2 * n)
        normalizer = sorted((_reduce_weight(v, gens, n) for v in normalizer), key=lambda v: pauli_weight_key(v, n))
        basis = self._basis.copy()
        cands = [v for v in normalizer if basis.add(v)]
        pairs = _symplectic_pairs(cands, n)
        out = []
        for a, b in pairs:
            a, b = _reduce_weight(a, gens, n), _reduce_weight(b, gens, n)
            out.append((PauliOperator.from_symplectic(n, a), PauliOperator.from_symplectic(n, b)))
        return out

    def _check_logicals(self) -> None:
        if len(self.logicals) != self.k:
            raise RankDeficient(f"expected {self.k} logical pairs, got {len(self.logicals)}")
        flat = [p for pair in self.logicals for p in pair]
        for p in flat:
            if not self.commutes_with_checks(p):
                raise CommutationViolation(f"logical {p} anticommutes with a check")
        for i, (xa, za) in enumerate(self.logicals):
            for j, (xb, zb) in enumerate(self.logicals):
                want = 1 if i == j else 0
                if symplectic_product(xa, zb) != want or (
                    i != j and (symplectic_product(xa, xb) or symplectic_product(za, zb))
                ):
                    raise CommutationViolation("logical pairs are not symplectically paired")
        basis = self._basis.copy()
        for p in flat:
            if not basis.add(p.symplectic):
                raise RankDeficient(f"logical {p} is dependent on the stabilizer")

    # ------------------------------------------------------------ states
    def code_state(
        self,
        choices: Sequence[tuple[str, int]] | None = None,
        signs: Sequence[int] | None = None,
    ) -> StabilizerState:
        """Code state fixed by one logical per encoded qubit.

        ``choices[l]`` is ``("X", +1)``, ``("Z", -1)`` etc.; the default fixes
        every logical to ``("X", +1)``. ``signs`` sets the eigenvalue of each
        independent stabilizer (default +1).
        """
        if choices is None:
            choices = [("X", 1)] * self.k
        if len(choices) != self.k:
            raise ValueError(f"need {self.k} logical choices, got {len(choices)}")
        stabs = self.independent_stabilizers
        signs = [1] * len(stabs) if signs is None else list(signs)
        if len(signs) != len(stabs):
            raise ValueError(f"need {len(stabs)} stabilizer signs")
        gens = [s.unsigned() if sg == 1 else -s.unsigned() for s, sg in zip(stabs, signs)]
        for (letter, sign), (lx, lz) in zip(choices, self.logicals):
            op = {"X": lx, "Z": lz}[letter.upper()].unsigned()
            gens.append(op if sign == 1 else -op)
        return StabilizerState(gens)


class CssCode(StabilizerCode):
    """CSS code from Z-check rows ``hz`` and X-check rows ``hx`` (ints, bit q = qubit q)."""

    def __init__(
        self,
        n: int,
        hz: Sequence[int],
        hx: Sequence[int],
        logicals: Sequence[tuple[PauliOperator, PauliOperator]] | None = None,
    ) -> None:
        self.hz = tuple(int(r) for r in hz)
        self.hx = tuple(int(r) for r in hx)
        limit = 1 << n
        if any(not 0 <= r < limit for r in self.hz + self.hx):
            raise DimensionMismatch(f"check rows do not fit in {n} qubits")
        for a in self.hz:
            for b in self.hx:
                if dot(a, b):
                    raise CommutationViolation("Hz Hx^T != 0 over GF(2)")
        stabs = [PauliOperator.hermitian(n, 0, r) for r in self.hz if r]
        stabs += [PauliOperator.hermitian(n, r, 0) for r in self.hx if r]
        if logicals is None:
            logicals = _css_logicals(n, self.hz, self.hx)
        super().__init__(stabs, logicals, n=n)

    @cached_property
    def rank_z(self) -> int:
        return len(ReducedBasis(self.hz))

    @cached_property
    def rank_x(self) -> int:
        return len(ReducedBasis(self.hx))

    @classmethod
    def from_matrices(cls, hz, hx, n: int | None = None) -> CssCode:
        hz_arr = np.asarray(hz, dtype=np.uint8)
        hx_arr = np.asarray(hx, dtype=np.uint8)
        if n is None:
            n = max(hz_arr.shape[-1] if hz_arr.size else 0, hx_arr.shape[-1] if hx_arr.size else 0)
        hz_rows = rows_from_matrix(hz_arr.reshape(-1, n)) if hz_arr.size else []
        hx_rows = rows_from_matrix(hx_arr.reshape(-1, n)) if hx_arr.size else []
        return cls(n, hz_rows, hx_rows)

    def logical_x_vectors(self) -> list[int]:
        return [lx.x for lx, _ in self.logicals]

    def logical_z_vectors(self) -> list[int]:
        return [lz.z for _, lz in self.logicals]

    def z_column_weights(self) -> list[int]:
        return [sum((r >> q) & 1 for r in self.hz) for q in range(self.n)]


def _css_sector(checks: Sequence[int], other: Sequence[int], n: int) -> list[int]:
    """Low-weight representatives of ker(checks) modulo rowspace(other)."""
    cands = [_reduce_weight_plain(v, other) for v in kernel(list(checks), n)]
    cands.sort(key=lambda v: (v.bit_count(), tuple(iter_bits(v))))
    basis = ReducedBasis(other)
    return [v for v in cands if basis.add(v)]


def _reduce_weight_plain(vec: int, gens: Sequence[int]) -> int:
    improved = True
    while improved:
        improved = False
        for g in gens:
            cand = vec ^ g
            if (cand.bit_count(), tuple(iter_bits(cand))) < (vec.bit_count(), tuple(iter_bits(vec))):
                vec, improved = cand, True
    return vec


def _css_logicals(n: int, hz: Sequence[int], hx: Sequence[int]) -> list[tuple[PauliOperator, PauliOperator]]:
    xs = _css_sector(hz, hx, n)
    zs = _css_sector(hx, hz, n)
    if len(xs) != len(zs):
        raise RankDeficient("X and Z logical sectors have different dimensions")
    k = len(xs)
    if k == 0:
        return []
    pairing = [sum(dot(a, b) << j for j, b in enumerate(zs)) for a in xs]
    inv = inverse(pairing, k)
    # Z'_b = sum_j inv[j][b] Z_j makes X_a . Z'_b = delta_ab
    new_zs = []
    for b in range(k):
        vec = 0
        for j in range(k):
            if (inv[j] >> b) & 1:
                vec ^= zs[j]
        new_zs.append(_reduce_weight_plain(vec, hz))
    return [
        (PauliOperator.hermitian(n, x, 0), PauliOperator.hermitian(n, 0, z))
        for x, z in zip(xs, new_zs)
    ]


def css_from_matrices(hz, hx, n: int | None = None) -> CssCode:
    return CssCode.from_matrices(hz, hx, n)


# ---------------------------------------------------------------- distance
def _columns(rows: Sequence[int], n: int) -> list[int]:
    cols = [0] * n
    for i, r in enumerate(rows):
        for q in iter_bits(r):
            cols[q] |= 1 << i
    return cols


def distance_bruteforce(
    code: StabilizerCode,
    kind: str = "full",
    budget: int = DEFAULT_BUDGET,
    max_weight: int | None = None,
) -> int:
    """Minimum weight of a logical operator, by iterative deepening on weight.

    ``kind`` is ``"X"`` or ``"Z"`` for one CSS sector, or ``"full"``. Raises
    :class:`BudgetExceeded` (with the weight of the lightest known logical as
    ``upper_bound``) when the candidate count would pass ``budget``.
    """
    if code.k == 0:
        raise ValueError("a code without logical qubits has no distance")
    kind = kind.upper() if kind.lower() != "full" else "full"
    n = code.n
    upper = min(p.weight for pair in code.logicals for p in pair)
    if kind in ("X", "Z"):
        if not isinstance(code, CssCode):
            raise ValueError("sector distances need a CSS code")
        upper = min((lx if kind == "X" else lz).weight for lx, lz in code.logicals)
    limit = n if max_weight is None else max_weight
    spent = 0
    if isinstance(code, CssCode):
        sectors = {"X": (code.hz, code.hx), "Z": (code.hx, code.hz)}
        wanted = ["X", "Z"] if kind == "full" else [kind]
        data = {s: (_columns(sectors[s][0], n), ReducedBasis(sectors[s][1])) for s in wanted}
        for w in range(1, limit + 1):
            for s in wanted:
                cols, stab = data[s]
                for supp in combinations(range(n), w):
                    spent += 1
                    if spent > budget:
                        raise BudgetExceeded(f"distance search passed {budget} candidates", upper)
                    syn = 0
                    vec = 0
                    for q in supp:
                        syn ^= cols[q]
                        vec |= 1 << q
                    if syn == 0 and not stab.contains(vec):
                        return w
        raise BudgetExceeded(f"no logical of weight <= {limit}", upper)
    if kind != "full":
        raise ValueError("sector distances need a CSS code")
    gens = [s.symplectic for s in code.stabilizers]
    # per qubit and letter (X, Z, Y): syndrome bitmask against the generators
    letter_syn = []
    for q in range(n):
        row = []
        for lx, lz in ((1, 0), (0, 1), (1, 1)):
            vec = (lx << q) | (lz << (q + n))
            row.append(sum(_sp(vec, g, n) << i for i, g in enumerate(gens)))
        letter_syn.append(row)
    for w in range(1, limit + 1):
        for supp in combinations(range(n), w):
            for letters in product(range(3), repeat=w):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(f"distance search passed {budget} candidates", upper)
                syn = 0
                for q, a in zip(supp, letters):
                    syn ^= letter_syn[q][a]
                if syn:
                    continue
                vec = 0
                for q, a in zip(supp, letters):
                    vec |= (int(a != 1) << q) | (int(a != 0) << (q + n))
                if not code._basis.contains(vec):
                    return w
    raise BudgetExceeded(f"no logical of weight <= {limit}", upper)


def low_weight_stabilizers(code: StabilizerCode, max_weight: int, budget: int = DEFAULT_BUDGET) -> list[PauliOperator]:
    """Every nonidentity stabilizer element (sign ignored) of weight ``<= max_weight``."""
    n = code.n
    found = []
    spent = 0
    for w in range(1, min(max_weight, n) + 1):
        for supp in combinations(range(n), w):
            for letters in product(((1, 0), (0, 1), (1, 1)), repeat=w):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(f"stabilizer search passed {budget} candidates")
                x = z = 0
                for q, (lx, lz) in zip(supp, letters):
                    x |= lx << q
                    z |= lz << q
                vec = x | (z << n)
                if code._basis.contains(vec):
                    found.append(PauliOperator.hermitian(n, x, z))
    return found


def is_nondegenerate(code: StabilizerCode, K: int, budget: int = DEFAULT_BUDGET) -> bool:
    """No product of two distinct Paulis of weight ``<= K`` is a nonidentity stabilizer.

    Any stabilizer of weight ``<= 2K`` splits into two such Paulis on disjoint
    halves of its support, so the test is whether such stabilizers exist.
    """
    return not low_weight_stabilizers(code, 2 * K, budget)


def stabilizer_state_from_code(
    code: StabilizerCode,
    logical_basis: Sequence[tuple[str, int]] | None = None,
    signs: Sequence[int] | None = None,
) -> StabilizerState:
    return code.code_state(logical_basis, signs)


# ---------------------------------------------------------------- file formats
def write_alist(rows: Sequence[int], n: int) -> str:
    """MacKay alist text for the matrix whose rows are ``rows`` (1-indexed lists, zero padded)."""
    m = len(rows)
    cols = [[i for i, r in enumerate(rows) if (r >> q) & 1] for q in range(n)]
    row_lists = [list(iter_bits(r)) for r in rows]
    max_col = max((len(c) for c in cols), default=0)
    max_row = max((len(r) for r in row_lists), default=0)
    lines = [f"{n} {m}", f"{max_col} {max_row}"]
    lines.append(" ".join(str(len(c)) for c in cols))
    lines.append(" ".join(str(len(r)) for r in row_lists))
    for c in cols:
        lines.append(" ".join(str(i + 1) for i in c + [-1] * (max_col - len(c))))
    for r in row_lists:
        lines.append(" ".join(str(q + 1) for q in r + [-1] * (max_row - len(r))))
    return "\n".join(lines) + "\n"


def read_alist(text: str) -> tuple[int, list[int]]:
    """Parse alist text into ``(n, rows)``; zero entries are padding."""
    tokens = [int(t) for t in text.split()]
    try:
        n, m = tokens[0], tokens[1]
        pos = 4 + n + m  # skip dims, max degrees and the degree lists
        col_deg = tokens[4 : 4 + n]
        max_col = tokens[2]
        rows = [0] * m
        for q in range(n):
            entries = tokens[pos : pos + max_col]
            pos += max_col
            real = [e for e in entries if e > 0]
            if len(real) != col_deg[q]:
                raise ValueError(f"column {q} lists {len(real)} entries, expected {col_deg[q]}")
            for e in real:
                if e > m:
                    raise ValueError(f"row index {e} out of range")
                rows[e - 1] |= 1 << q
        max_row = tokens[3]
        row_deg = tokens[4 + n : 4 + n + m]
        for i in range(m):
            entries = tokens[pos : pos + max_row]
            pos += max_row
            real = {e - 1 for e in entries if e > 0}
            if len(real) != row_deg[i] or real != set(iter_bits(rows[i])):
                raise ValueError(f"row {i} disagrees with the column lists")
    except IndexError as exc:
        raise ValueError("truncated alist data") from exc
    return n, rows


def matrix_to_json(rows: Sequence[int], n: int) -> dict:
    return {"n": n, "rows": [list(iter_bits(r)) for r in rows]}


def matrix_from_json(data: dict) -> tuple[int, list[int]]:
    n = int(data["n"])
    rows = []
    for entry in data["rows"]:
        word = 0
        for q in entry:
            if not 0 <= int(q) < n:
                raise ValueError(f"index {q} outside 0..{n - 1}")
            word |= 1 << int(q)
        rows.append(word)
    return n, rows


def code_to_json(code: CssCode) -> dict:
    return {"n": code.n, "hz": matrix_to_json(code.hz, code.n)["rows"], "hx": matrix_to_json(code.hx, code.n)["rows"]}


def code_from_json(data: dict) -> CssCode:
    n = int(data["n"])
    _, hz = matrix_from_json({"n": n, "rows": data.get("hz", [])})
    _, hx = matrix_from_json({"n": n, "rows": data.get("hx", [])})
    return CssCode(n, hz, hx)


def stabilizers_from_strings(texts: Iterable[str]) -> list[PauliOperator]:
    from .pauli import parse_pauli

    return [parse_pauli(t) for t in texts]
