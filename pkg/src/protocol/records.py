# ABOUTME: Records produced by a protocol run: per-round scores, the transcript and the outcome.
# ABOUTME: Transcripts store columns as arrays and expose RoundRecord views on demand.

from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from numpy.typing import NDArray

from src.rates.eat import RateResult
from src.sources.bits import BitString


class AbortReason(str, Enum):
    NONE = "none"
    THRESHOLD = "threshold"
    INVALID_OUTPUT = "invalid_output"


@dataclass(frozen=True)
class RoundRecord:
    """Inputs, outputs and score of one round."""

    i: int
    x: int
    y: int
    a: int
    b: int
    c: float


@dataclass(frozen=True, eq=False)
class Transcript:
    """Column store of every executed round."""

    x: NDArray[np.int64]
    y: NDArray[np.int64]
    a: NDArray[np.int64]
    b: NDArray[np.int64]
    c: NDArray[np.float64]

    @classmethod
    def empty(cls) -> "Transcript":
        ints = np.empty(0, dtype=np.int64)
        return cls(ints, ints, ints, ints, np.empty(0, dtype=np.float64))

    def __len__(self) -> int:
        return int(self.c.size)

    def __getitem__(self, i: int) -> RoundRecord:
        return RoundRecord(
            i, int(self.x[i]), int(self.y[i]), int(self.a[i]), int(self.b[i]), float(self.c[i])
        )

    def __iter__(self) -> Iterator[RoundRecord]:
        return (self[i] for i in range(len(self)))

    def pairs(self) -> NDArray[np.int64]:
        """Input pair indices 2x + y, the source history."""
        return 2 * self.x + self.y

    def output_bits(self) -> BitString:
        """A^n B^n interleaved as a_1 b_1 a_2 b_2 ..."""
        out = np.empty(2 * len(self), dtype=np.uint8)
        out[0::2] = self.a
        out[1::2] = self.b
        return BitString(out)


@dataclass
class ProtocolOutcome:
    """Result of one protocol execution."""

    aborted: bool
    reason: AbortReason
    c_bar: float
    transcript: Transcript
    key: BitString | None
    secrecy_eps: float
    secrecy_distance: float
    completeness_eps: float
    rate: RateResult | None
    d: int
    m: int

    def summary(self) -> dict[str, Any]:
        """Summary row: c_bar, aborted, m, secrecy_eps, eta_opt, s_t_star."""
        return {
            "c_bar": self.c_bar,
            "aborted": self.aborted,
            "m": self.m,
            "secrecy_eps": self.secrecy_eps,
            "eta_opt": self.rate.eta_opt if self.rate else float("nan"),
            "s_t_star": self.rate.s_t_star if self.rate else float("nan"),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.summary(),
            "reason": self.reason.value,
            "rounds": len(self.transcript),
            "secrecy_distance": self.secrecy_distance,
            "completeness_eps": self.completeness_eps,
            "d": self.d,
            "key_bits": len(self.key) if self.key is not None else 0,
        }
