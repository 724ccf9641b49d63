"""Independent reference matrices built from textbook Kronecker products."""

from __future__ import annotations

from functools import reduce

import numpy as np

LETTERS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PREFIX = {"": 1, "+": 1, "-": -1, "+i": 1j, "i": 1j, "-i": -1j}


def kron_pauli(text: str) -> np.ndarray:
    """Matrix of a signed Pauli string; qubit 0 (leftmost letter) is the lowest index bit."""
    body = text.lstrip("+-i")
    prefix = text[: len(text) - len(body)]
    mats = [LETTERS[ch] for ch in reversed(body)]
    return PREFIX[prefix] * reduce(np.kron, mats)


def ghz_vector(n: int) -> np.ndarray:
    v = np.zeros(1 << n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def kron_hamiltonian(h) -> np.ndarray:
    from stabqfi.pauli import format_pauli

    return sum(c * kron_pauli(format_pauli(p)) for c, p in h.terms)


def variance(psi: np.ndarray, h) -> float:
    if not isinstance(h, np.ndarray):
        h = kron_hamiltonian(h)
    hpsi = h @ psi
    return float(np.vdot(hpsi, hpsi).real - np.vdot(psi, hpsi).real ** 2)
