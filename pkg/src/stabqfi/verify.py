"""Randomized checks of the code-state QFI bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import StabilizerCode
from .constructions import toric_code
from .dense import statevector
from .hamiltonian import PauliHamiltonian, validate_k_local
from .pauli import PauliOperator
from .qfi import qfi_pure_dense, qfi_stabilizer
from .state import StabilizerState


def random_one_local(n: int, rng: np.random.Generator) -> PauliHamiltonian:
    """``sum_q a_q . sigma_q`` with each ``|a_q| <= 1`` (so every local term has norm <= 1)."""
    terms, groups = [], []
    for q in range(n):
        direction = rng.normal(size=3)
        direction *= rng.uniform() / np.linalg.norm(direction)
        for letter, a in zip("XYZ", direction):
            terms.append((float(a), PauliOperator.single(n, q, letter)))
            groups.append(q)
    return PauliHamiltonian(n, terms, groups)


def random_code_state(code: StabilizerCode, rng: np.random.Generator) -> StabilizerState:
    choices = [(str(rng.choice(["X", "Z"])), int(rng.choice([1, -1]))) for _ in range(code.k)]
    return code.code_state(choices)


@dataclass
class BoundSweep:
    name: str
    bound: float
    max_qfi: float
    violations: int
    trials: int
    max_dense_diff: float | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "bound": self.bound, "max_qfi": self.max_qfi,
               "violations": self.violations, "trials": self.trials}
        if self.max_dense_diff is not None:
            out["max_dense_diff"] = self.max_dense_diff
        return out


def verify_theorem2(
    code: StabilizerCode,
    trials: int,
    seed: int,
    dense_check: bool = True,
    name: str = "",
) -> BoundSweep:
    """Random 1-local Hamiltonians on random code states against ``m K^2``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    diff = 0.0 if dense_check else None
    violations = 0
    bound = 0.0
    for _ in range(trials):
        h = random_one_local(code.n, rng)
        h.require_bounded()
        prof = validate_k_local(h)
        bound = float(prof.m * prof.K**2)
        state = random_code_state(code, rng)
        value = qfi_stabilizer(state, h, matrix_threshold=0).value
        if dense_check:
            diff = max(diff, abs(value - qfi_pure_dense(statevector(state), h)))
        worst = max(worst, value)
        violations += value > bound + 1e-9
    return BoundSweep(name or repr(code), bound, worst, violations, trials, diff)


def verify_toric_sum_z(L: int) -> tuple[float, int, bool]:
    """``(QFI, m, all single-qubit correlations vanish)`` for ``H = sum Z`` on toric(L, L)."""
    code = toric_code(L, L)
    state = code.code_state()
    h = PauliHamiltonian.sum_z(code.n)
    report = qfi_stabilizer(state, h)
    mat = report.correlation_matrix
    off = mat - np.diag(np.diag(mat))
    means_zero = all(state.expectation(p) == 0 for p in h.ops)
    return report.value, h.m, bool(means_zero and not off.any())


def verify_toric_mixtures(L: int, trials: int, seed: int) -> BoundSweep:
    """Random single-qubit Pauli mixtures on toric(L, L) against ``F <= m``."""
    rng = np.random.default_rng(seed)
    code = toric_code(L, L)
    worst = 0.0
    violations = 0
    for _ in range(trials):
        h = random_one_local(code.n, rng)
        state = random_code_state(code, rng)
        value = qfi_stabilizer(state, h, matrix_threshold=0).value
        worst = max(worst, value)
        violations += value > h.m + 1e-9
    return BoundSweep(f"toric({L},{L})", float(code.n), worst, violations, trials)
