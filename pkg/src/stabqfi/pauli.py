"""n-qubit Pauli operators in binary symplectic form.

An operator is stored as ``i**phase * X**x Z**z`` where ``x`` and ``z`` are
Python ints used as packed bit-vectors (bit ``q`` is qubit ``q``). Every
per-qubit operation reduces to XOR / AND / popcount on those words, which
keeps products cheap even at ``n`` in the thousands.

The Hermitian Pauli-Y is ``i X Z``, so a Hermitian operator with sign ``s``
has ``phase == popcount(x & z) + (0 if s > 0 else 2)  (mod 4)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NonHermitian, PauliParseError

_PREFIXES = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PREFIX_OUT = {0: "", 1: "+i", 2: "-", 3: "-i"}
_PAULI_RE = re.compile(r"^(\+i|-i|\+|-|i)?([IXYZ_]*)$")


def iter_bits(word: int) -> Iterable[int]:
    """Yield the indices of the set bits of ``word`` in increasing order."""
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


def bits_to_int(bits: Iterable[int] | np.ndarray) -> int:
    """Pack a 0/1 sequence (index 0 first) into an int."""
    word = 0
    for i, b in enumerate(bits):
        if b:
            word |= 1 << i
    return word


def int_to_bits(word: int, n: int) -> np.ndarray:
    """Unpack ``word`` into a length-``n`` uint8 array."""
    raw = np.frombuffer(word.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def support_to_int(support: Iterable[int]) -> int:
    word = 0
    for q in support:
        word |= 1 << q
    return word


@dataclass(frozen=True)
class PauliOperator:
    """The operator ``i**phase * X**x Z**z`` on ``n`` qubits."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"bit-vectors do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # ------------------------------------------------------------------ builders
    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n)

    @classmethod
    def hermitian(cls, n: int, x: int, z: int, sign: int = 1) -> PauliOperator:
        """Hermitian operator ``sign * (X**x Z**z with Y = iXZ)``."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return cls(n, x, z, (x & z).bit_count() + (0 if sign > 0 else 2))

    @classmethod
    def from_support(cls, n: int, support: Iterable[int], letter: str) -> PauliOperator:
        """Hermitian product of ``letter`` ('X', 'Y' or 'Z') on every qubit of ``support``."""
        word = support_to_int(support)
        x = word if letter in "XY" else 0
        z = word if letter in "ZY" else 0
        if letter not in ("X", "Y", "Z"):
            raise PauliParseError(f"unknown Pauli letter {letter!r}")
        return cls.hermitian(n, x, z)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliOperator:
        return cls.from_support(n, [qubit], letter)

    @classmethod
    def from_bits(cls, x: Sequence[int], z: Sequence[int], sign: int = 1) -> PauliOperator:
        if len(x) != len(z):
            raise DimensionMismatch("x and z bit-vectors differ in length")
        return cls.hermitian(len(x), bits_to_int(x), bits_to_int(z), sign)

    @classmethod
    def from_symplectic(cls, n: int, vec: int, sign: int = 1) -> PauliOperator:
        """Inverse of :attr:`symplectic` (x in the low ``n`` bits, z above)."""
        mask = (1 << n) - 1
        return cls.hermitian(n, vec & mask, vec >> n, sign)

    # ------------------------------------------------------------------ views
    @property
    def symplectic(self) -> int:
        """Phase-free ``2n``-bit vector ``x | z << n``."""
        return self.x | (self.z << self.n)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> frozenset[int]:
        return frozenset(iter_bits(self.x | self.z))

    @property
    def is_identity(self) -> bool:
        """True for ``I`` up to phase."""
        return self.x == 0 and self.z == 0

    @property
    def is_hermitian(self) -> bool:
        return (self.phase - (self.x & self.z).bit_count()) % 2 == 0

    @property
    def sign(self) -> complex:
        """Scalar in front of the letter string (1, i, -1 or -i)."""
        return 1j ** ((self.phase - (self.x & self.z).bit_count()) % 4)

    def x_bits(self) -> np.ndarray:
        return int_to_bits(self.x, self.n)

    def z_bits(self) -> np.ndarray:
        return int_to_bits(self.z, self.n)

    # ------------------------------------------------------------------ algebra
    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return mul(self, other)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z, self.phase + 2)

    def commutes(self, other: PauliOperator) -> bool:
        return commutes(self, other)

    def unsigned(self) -> PauliOperator:
        """Same letters with sign +1."""
        return PauliOperator.hermitian(self.n, self.x, self.z)

    def restricted(self, qubits: Sequence[int]) -> PauliOperator:
        """Letters on ``qubits`` (in that order) as a ``len(qubits)``-qubit operator.

        The phase of the result is chosen so that the letter-string sign is kept.
        """
        x = z = 0
        for k, q in enumerate(qubits):
            x |= ((self.x >> q) & 1) << k
            z |= ((self.z >> q) & 1) << k
        sign_exp = (self.phase - (self.x & self.z).bit_count()) % 4
        return PauliOperator(len(qubits), x, z, sign_exp + (x & z).bit_count())

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliOperator({format_pauli(self)!r})"


def _check_dims(p: PauliOperator, q: PauliOperator) -> None:
    if p.n != q.n:
        raise DimensionMismatch(f"{p.n}-qubit and {q.n}-qubit operators")


def mul(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p @ q``.

    ``X**x1 Z**z1 X**x2 Z**z2 = (-1)**|z1 & x2| X**(x1^x2) Z**(z1^z2)``.
    """
    _check_dims(p, q)
    phase = p.phase + q.phase + 2 * (p.z & q.x).bit_count()
    return PauliOperator(p.n, p.x ^ q.x, p.z ^ q.z, phase)


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1


def anticommuting_pair(ops: Sequence[PauliOperator]) -> tuple[int, int] | None:
    """First ``(i, j)``, ``i < j``, with ``ops[i]`` and ``ops[j]`` anticommuting, or ``None``.

    Uses per-qubit column bitsets, so the cost is linear in the total weight.
    """
    cx: dict[int, int] = {}
    cz: dict[int, int] = {}
    for i, p in enumerate(ops):
        for q in iter_bits(p.x):
            cx[q] = cx.get(q, 0) | (1 << i)
        for q in iter_bits(p.z):
            cz[q] = cz.get(q, 0) | (1 << i)
    for i, p in enumerate(ops):
        syn = 0
        for q in iter_bits(p.x):
            syn ^= cz.get(q, 0)
        for q in iter_bits(p.z):
            syn ^= cx.get(q, 0)
        syn >>= i + 1
        if syn:
            return i, i + (syn & -syn).bit_length()
    return None


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    _check_dims(p, q)
    return symplectic_product(p, q) == 0


def weight(p: PauliOperator) -> int:
    return p.weight


def support(p: PauliOperator) -> frozenset[int]:
    return p.support


def require_hermitian(p: PauliOperator) -> None:
    if not p.is_hermitian:
        raise NonHermitian(f"{format_pauli(p)} is not Hermitian")


def parse_pauli(text: str) -> PauliOperator:
    """Parse strings such as ``"XIZ"``, ``"-Y"`` or ``"+iXX"``.

    Qubit 0 is the leftmost letter; ``_`` is accepted as a synonym of ``I``.
    """
    if not isinstance(text, str):
        raise PauliParseError("Pauli text must be a string")
    text = text.strip()
    m = _PAULI_RE.match(text)
    if not m or not m.group(2):
        raise PauliParseError(f"cannot parse Pauli string {text!r}")
    prefix = _PREFIXES[m.group(1) or ""]
    x = z = 0
    for q, ch in enumerate(m.group(2)):
        if ch in "XY":
            x |= 1 << q
        if ch in "ZY":
            z |= 1 << q
    return PauliOperator(len(m.group(2)), x, z, prefix + (x & z).bit_count())


def format_pauli(p: PauliOperator) -> str:
    letters = []
    for q in range(p.n):
        bx, bz = (p.x >> q) & 1, (p.z >> q) & 1
        letters.append("IXZY"[bx | (bz << 1)])
    sign_exp = (p.phase - (p.x & p.z).bit_count()) % 4
    return _PREFIX_OUT[sign_exp] + "".join(letters)


def canonical_pauli_text(text: str) -> str:
    return format_pauli(parse_pauli(text))


def random_pauli(n: int, rng: np.random.Generator, hermitian: bool = False) -> PauliOperator:
    x = bits_to_int(rng.integers(0, 2, n))
    z = bits_to_int(rng.integers(0, 2, n))
    if hermitian:
        return PauliOperator.hermitian(n, x, z, int(rng.choice([1, -1])))
    return PauliOperator(n, x, z, int(rng.integers(0, 4)))
