# ABOUTME: Behaviors P(ab|xy) of two-input, two-output boxes and their Born-rule computation.
# ABOUTME: A Behavior is the common currency between device simulation and Bell functionals.

from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.config import config
from src.errors import InvalidStateError
from src.quantum.measurement import QuantumStrategy
from src.quantum.operators import DensityOperator


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional table p[a, b, x, y] = P(ab|xy)."""

    p: NDArray[np.float64]

    def __post_init__(self) -> None:
        table = np.asarray(self.p, dtype=np.float64)
        tol = config.NORMALIZATION_TOL
        if table.shape != (2, 2, 2, 2):
            raise InvalidStateError(f"behavior must have shape (2, 2, 2, 2), got {table.shape}")
        if not np.all(np.isfinite(table)):
            raise InvalidStateError("behavior has non-finite entries")
        if np.any(table < -tol) or np.any(table > 1 + tol):
            raise InvalidStateError("behavior entries must lie in [0, 1]")
        sums = table.sum(axis=(0, 1))
        if np.any(np.abs(sums - 1.0) > tol):
            raise InvalidStateError(f"behavior is not normalized per input pair: {sums.ravel()}")
        table = np.clip(table, 0.0, 1.0)
        table.setflags(write=False)
        object.__setattr__(self, "p", table)

    @classmethod
    def uniform(cls) -> "Behavior":
        return cls(np.full((2, 2, 2, 2), 0.25))

    @classmethod
    def deterministic(cls, alice: tuple[int, int], bob: tuple[int, int]) -> "Behavior":
        """Local deterministic box: Alice outputs alice[x], Bob outputs bob[y]."""
        table = np.zeros((2, 2, 2, 2))
        for x in (0, 1):
            for y in (0, 1):
                table[alice[x], bob[y], x, y] = 1.0
        return cls(table)

    def prob(self, a: int, b: int, x: int, y: int) -> float:
        return float(self.p[a, b, x, y])

    def joint(self, inputs: ArrayLike) -> NDArray[np.float64]:
        """P(abxy) = P(ab|xy) P_XY(xy) for a 2x2 input distribution."""
        q = np.asarray(inputs, dtype=np.float64).reshape(2, 2)
        return self.p * q[np.newaxis, np.newaxis, :, :]

    def alice_marginal(self) -> NDArray[np.float64]:
        """Indexed [a, x, y]."""
        return self.p.sum(axis=1)

    def bob_marginal(self) -> NDArray[np.float64]:
        """Indexed [b, x, y]."""
        return self.p.sum(axis=0)

    def signalling_gap(self) -> float:
        """Largest dependence of one party's marginal on the other party's input."""
        alice = self.alice_marginal()
        bob = self.bob_marginal()
        return float(
            max(
                np.max(np.abs(alice[:, :, 0] - alice[:, :, 1])),
                np.max(np.abs(bob[:, 0, :] - bob[:, 1, :])),
            )
        )

    def is_non_signalling(self, tol: float | None = None) -> bool:
        return self.signalling_gap() <= (config.NORMALIZATION_TOL if tol is None else tol)

    def to_dict(self) -> dict[str, Any]:
        return {
            f"p{a}{b}|{x}{y}": float(self.p[a, b, x, y])
            for a in (0, 1)
            for b in (0, 1)
            for x in (0, 1)
            for y in (0, 1)
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Behavior):
            return NotImplemented
        return bool(np.allclose(self.p, other.p, atol=config.NORMALIZATION_TOL))

    __hash__ = None  # type: ignore[assignment]


def behavior_from_projectors(
    state: DensityOperator,
    alice: NDArray[np.complex128],
    bob: NDArray[np.complex128],
) -> Behavior:
    """
    Born rule P(ab|xy) = Tr[(A_x^a (x) B_y^b) rho].

    Args:
        state: Two-qubit state.
        alice: Projectors indexed [a, x, row, col].
        bob: Projectors indexed [b, y, row, col].
    """
    rho = state.matrix.reshape(2, 2, 2, 2)
    table = np.einsum("axij,bykl,jlik->abxy", alice, bob, rho).real
    return Behavior(table)


def born_behavior(strategy: QuantumStrategy) -> Behavior:
    """Behavior produced by measuring the strategy's state."""
    return behavior_from_projectors(
        strategy.state, strategy.alice_projectors(), strategy.bob_projectors()
    )
