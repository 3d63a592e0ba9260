# ABOUTME: Binary projective qubit measurements and the two-party strategies built from them.
# ABOUTME: Measurements lie in the x-z plane (one angle); full Bloch directions exist for spot checks.

from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.errors import ArgumentError, InvalidStateError
from src.quantum.operators import (
    IDENTITY2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityOperator,
    phi_plus,
)


def bloch_projectors(direction: ArrayLike) -> NDArray[np.complex128]:
    """
    Projectors (P0, P1) for the +1/-1 outcomes along a Bloch direction.

    Returns:
        Array of shape (2, 2, 2) indexed [outcome, row, col].
    """
    n = np.asarray(direction, dtype=np.float64)
    norm = np.linalg.norm(n)
    if n.shape != (3,) or norm == 0:
        raise ArgumentError(f"Bloch direction must be a non-zero 3-vector, got {n}")
    n = n / norm
    observable = n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
    return np.stack([(IDENTITY2 + observable) / 2, (IDENTITY2 - observable) / 2])


@dataclass(frozen=True)
class Measurement:
    """Measurement of cos(angle) Z + sin(angle) X; outcome 0 is the +1 eigenspace."""

    angle: float

    @property
    def observable(self) -> NDArray[np.complex128]:
        return np.cos(self.angle) * PAULI_Z + np.sin(self.angle) * PAULI_X

    def projector(self, outcome: int) -> NDArray[np.complex128]:
        if outcome not in (0, 1):
            raise ArgumentError(f"outcome must be 0 or 1, got {outcome}")
        sign = 1.0 if outcome == 0 else -1.0
        return (IDENTITY2 + sign * self.observable) / 2

    def projectors(self) -> NDArray[np.complex128]:
        return np.stack([self.projector(0), self.projector(1)])

    @property
    def direction(self) -> NDArray[np.float64]:
        return np.array([np.sin(self.angle), 0.0, np.cos(self.angle)])


@dataclass(frozen=True)
class QuantumStrategy:
    """A two-qubit state with one measurement per input for each party."""

    state: DensityOperator
    alice: tuple[Measurement, Measurement]
    bob: tuple[Measurement, Measurement]

    def __post_init__(self) -> None:
        if self.state.dim != 4:
            raise InvalidStateError(f"strategies act on two qubits, got dimension {self.state.dim}")
        if len(self.alice) != 2 or len(self.bob) != 2:
            raise ArgumentError("each party needs exactly one measurement per input")

    @classmethod
    def from_angles(cls, state: DensityOperator, angles: ArrayLike) -> "QuantumStrategy":
        """Angles ordered (alice_0, alice_1, bob_0, bob_1)."""
        a0, a1, b0, b1 = (float(t) for t in np.asarray(angles, dtype=np.float64).ravel())
        return cls(state, (Measurement(a0), Measurement(a1)), (Measurement(b0), Measurement(b1)))

    @property
    def angles(self) -> tuple[float, float, float, float]:
        return (self.alice[0].angle, self.alice[1].angle, self.bob[0].angle, self.bob[1].angle)

    def alice_projectors(self) -> NDArray[np.complex128]:
        """Indexed [outcome, input, row, col]."""
        return np.stack([m.projectors() for m in self.alice], axis=1)

    def bob_projectors(self) -> NDArray[np.complex128]:
        return np.stack([m.projectors() for m in self.bob], axis=1)

    def to_dict(self) -> dict[str, Any]:
        return {
            "angles": list(self.angles),
            "spectrum": self.state.spectrum().tolist(),
        }


def optimal_chsh_strategy() -> QuantumStrategy:
    """|Phi+> with Alice at {0, pi/2} and Bob at {pi/4, -pi/4}; reaches beta = 2 sqrt(2)."""
    return QuantumStrategy.from_angles(phi_plus(), [0.0, np.pi / 2, np.pi / 4, -np.pi / 4])
