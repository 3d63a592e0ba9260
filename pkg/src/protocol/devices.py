# ABOUTME: Untrusted device models: honest quantum, deterministic classical and scripted replay.
# ABOUTME: Devices map (round, x, y, uniform draw) to outputs (a, b); i.i.d. devices also work on blocks.

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from src.errors import ArgumentError
from src.quantum.behavior import Behavior, born_behavior
from src.quantum.measurement import QuantumStrategy
from src.quantum.operators import depolarize

logger = logging.getLogger(__name__)


class DeviceKind(str, Enum):
    HONEST_QUANTUM = "honest_quantum"
    DETERMINISTIC = "deterministic"
    SCRIPTED = "scripted"


class DeviceModel(Protocol):
    """Protocol for device models."""

    kind: DeviceKind

    @property
    def is_iid(self) -> bool: ...

    def respond(self, index: int, x: int, y: int, u: float) -> tuple[int, int]: ...

    def respond_block(
        self, x: NDArray[np.int64], y: NDArray[np.int64], u: NDArray[np.float64]
    ) -> tuple[NDArray[np.int64], NDArray[np.int64]]: ...


@dataclass(frozen=True, eq=False)
class HonestQuantumDevice:
    """Measures a fresh copy of the (optionally depolarized) strategy state every round."""

    strategy: QuantumStrategy
    noise: float = 0.0
    kind: DeviceKind = DeviceKind.HONEST_QUANTUM
    behavior: Behavior = field(init=False)
    _cumulative: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        noisy = QuantumStrategy(depolarize(self.strategy.state, self.noise), self.strategy.alice,
                                self.strategy.bob)
        behavior = born_behavior(noisy)
        # cumulative[x, y, k] over joint outcomes k = 2a + b.
        joint = behavior.p.transpose(2, 3, 0, 1).reshape(2, 2, 4)
        cumulative = np.cumsum(joint, axis=2)
        object.__setattr__(self, "behavior", behavior)
        object.__setattr__(self, "_cumulative", cumulative)

    @property
    def is_iid(self) -> bool:
        return True

    def respond(self, index: int, x: int, y: int, u: float) -> tuple[int, int]:
        k = min(int(np.searchsorted(self._cumulative[x, y], u, side="right")), 3)
        return k // 2, k % 2

    def respond_block(
        self, x: NDArray[np.int64], y: NDArray[np.int64], u: NDArray[np.float64]
    ) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
        rows = self._cumulative[x, y]
        k = np.minimum((u[:, None] >= rows).sum(axis=1), 3)
        return k // 2, k % 2


@dataclass(frozen=True)
class DeterministicDevice:
    """Classical device answering alice[x] and bob[y] every round."""

    alice: tuple[int, int]
    bob: tuple[int, int]
    kind: DeviceKind = DeviceKind.DETERMINISTIC

    def __post_init__(self) -> None:
        if any(v not in (0, 1) for v in (*self.alice, *self.bob)):
            raise ArgumentError("deterministic output table must be total over inputs with bit values")

    @property
    def is_iid(self) -> bool:
        return True

    @property
    def behavior(self) -> Behavior:
        return Behavior.deterministic(self.alice, self.bob)

    def respond(self, index: int, x: int, y: int, u: float) -> tuple[int, int]:
        return self.alice[x], self.bob[y]

    def respond_block(
        self, x: NDArray[np.int64], y: NDArray[np.int64], u: NDArray[np.float64]
    ) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
        return np.asarray(self.alice)[x], np.asarray(self.bob)[y]


@dataclass(frozen=True)
class ScriptedDevice:
    """
    Replays fixed outputs round by round, whatever the inputs.

    Outputs are not checked for being bits; the executor aborts on anything else.
    """

    outputs: tuple[tuple[int, int], ...]
    kind: DeviceKind = DeviceKind.SCRIPTED

    @classmethod
    def from_pairs(cls, outputs: Sequence[Sequence[int]]) -> "ScriptedDevice":
        return cls(tuple((int(a), int(b)) for a, b in outputs))

    @property
    def is_iid(self) -> bool:
        return False

    def respond(self, index: int, x: int, y: int, u: float) -> tuple[int, int]:
        if index >= len(self.outputs):
            raise ArgumentError(f"scripted device exhausted after {len(self.outputs)} rounds")
        return self.outputs[index]

    def respond_block(
        self, x: NDArray[np.int64], y: NDArray[np.int64], u: NDArray[np.float64]
    ) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
        raise ArgumentError("scripted devices run on the sequential path only")
