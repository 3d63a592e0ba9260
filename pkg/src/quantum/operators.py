# ABOUTME: Density operators for small qubit systems and the standard states and channels on them.
# ABOUTME: Validation (finite, Hermitian, PSD, unit trace) happens once at construction.

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from src.config import config
from src.errors import ArgumentError, DomainError, InvalidStateError

logger = logging.getLogger(__name__)

IDENTITY2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def is_hermitian(matrix: NDArray[np.complex128], tol: float | None = None) -> bool:
    tolerance = config.HERMITIAN_TOL if tol is None else tol
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= tolerance)


def check_hermitian(matrix: ArrayLike, tol: float | None = None) -> NDArray[np.complex128]:
    """Return `matrix` as a complex array, raising InvalidStateError unless square, finite and Hermitian."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidStateError(f"operator must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("operator has non-finite entries")
    if not is_hermitian(m, tol):
        raise InvalidStateError("operator is not Hermitian")
    return m


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A validated, read-only density matrix."""

    matrix: NDArray[np.complex128]

    def __post_init__(self) -> None:
        m = check_hermitian(self.matrix).copy()
        trace = np.trace(m).real
        if abs(trace - 1.0) > config.NORMALIZATION_TOL:
            raise InvalidStateError(f"density operator has trace {trace}, expected 1")
        lowest = float(linalg.eigvalsh(m)[0])
        if lowest < -config.PSD_TOL:
            raise InvalidStateError(f"density operator is not PSD (min eigenvalue {lowest})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @classmethod
    def pure(cls, vector: ArrayLike) -> "DensityOperator":
        """|psi><psi| for a (not necessarily normalized) non-zero vector."""
        v = np.asarray(vector, dtype=np.complex128).ravel()
        norm = linalg.norm(v)
        if norm == 0 or not np.isfinite(norm):
            raise InvalidStateError("cannot build a pure state from a zero or non-finite vector")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int = 4) -> "DensityOperator":
        if dim < 1:
            raise ArgumentError(f"dimension must be positive, got {dim}")
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    def spectrum(self) -> NDArray[np.float64]:
        """Eigenvalues in descending order."""
        return linalg.eigvalsh(self.matrix)[::-1]

    def expectation(self, operator: NDArray[np.complex128]) -> float:
        return float(np.real(np.trace(operator @ self.matrix)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityOperator):
            return NotImplemented
        return self.dim == other.dim and bool(
            np.allclose(self.matrix, other.matrix, atol=config.NORMALIZATION_TOL)
        )

    __hash__ = None  # type: ignore[assignment]


def pure_state(vector: ArrayLike) -> DensityOperator:
    return DensityOperator.pure(vector)


def phi_plus() -> DensityOperator:
    """(|00> + |11>)/sqrt(2)."""
    return DensityOperator.pure([1.0, 0.0, 0.0, 1.0])


def maximally_mixed(dim: int = 4) -> DensityOperator:
    return DensityOperator.maximally_mixed(dim)


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """
    Trace distance (1/2)||rho - sigma||_1.

    Raises:
        ArgumentError: If the dimensions differ.
    """
    if rho.dim != sigma.dim:
        raise ArgumentError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    eigenvalues = linalg.eigvalsh(rho.matrix - sigma.matrix)
    return float(np.clip(0.5 * np.sum(np.abs(eigenvalues)), 0.0, 1.0))


def depolarize(rho: DensityOperator, q: float) -> DensityOperator:
    """
    Mix with white noise: (1 - q) rho + q I/dim.

    Raises:
        DomainError: If q is outside [0, 1].
    """
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"depolarizing weight must lie in [0, 1], got {q}")
    if q == 0.0:
        return rho
    identity = np.eye(rho.dim, dtype=np.complex128) / rho.dim
    return DensityOperator((1.0 - q) * rho.matrix + q * identity)
