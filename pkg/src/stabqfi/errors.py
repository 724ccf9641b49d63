"""Exception types raised across the package."""

from __future__ import annotations


class DimensionMismatch(ValueError):
    """Operands act on different numbers of qubits."""


class PauliParseError(ValueError):
    """Text does not describe a Pauli operator."""


class NonHermitian(ValueError):
    """A Hermitian Pauli operator was required."""


class CommutationViolation(ValueError):
    """Stabilizer generators (or checks) fail to commute."""


class RankDeficient(ValueError):
    """Generators are not independent where independence is required."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its candidate budget.

    ``upper_bound`` carries the best bound known when the search stopped
    (``None`` when nothing useful is known).
    """

    def __init__(self, message: str, upper_bound: int | None = None) -> None:
        super().__init__(message)
        self.upper_bound = upper_bound


class OverlappingSupports(ValueError):
    """Gates inside one circuit layer share a qubit."""


class NotNormalized(ValueError):
    """State vector norm differs from one."""


class NotDensityMatrix(ValueError):
    """Matrix is not Hermitian, positive semidefinite and unit trace."""


class InvalidDimensions(ValueError):
    """Lattice or family parameters are out of range."""


class DisconnectedGraph(ValueError):
    """Graph is not connected."""


class DegreeViolation(ValueError):
    """A vertex degree is outside the allowed range."""


class EdgeMissing(ValueError):
    """The requested edge does not exist in the graph."""


class BoundViolation(AssertionError):
    """A proven QFI upper bound was exceeded (implementation bug)."""
