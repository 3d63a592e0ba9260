# ABOUTME: Immutable bit strings used for seeds, device transcripts and extractor I/O.
# ABOUTME: Packing is little-endian within each byte (bit 0 is the least significant bit).

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.errors import ArgumentError


@dataclass(frozen=True, eq=False)
class BitString:
    """A read-only sequence of bits backed by a uint8 array."""

    bits: NDArray[np.uint8]

    def __post_init__(self) -> None:
        arr = np.asarray(self.bits)
        if arr.ndim != 1:
            raise ArgumentError(f"bit strings are one-dimensional, got shape {arr.shape}")
        if arr.size and not np.all((arr == 0) | (arr == 1)):
            raise ArgumentError("bit strings may only contain 0 and 1")
        arr = arr.astype(np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @classmethod
    def from_iterable(cls, values: Iterable[int] | ArrayLike) -> "BitString":
        if isinstance(values, np.ndarray):
            return cls(values)
        return cls(np.asarray(list(values), dtype=np.int64))  # type: ignore[arg-type]

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        """Parse a string such as "0110"."""
        if any(ch not in "01" for ch in text):
            raise ArgumentError(f"not a bit string: {text!r}")
        return cls(np.array([int(ch) for ch in text], dtype=np.uint8))

    @classmethod
    def from_hex(cls, payload: str) -> "BitString":
        """Four bits per hex digit, most significant bit first ("6" -> 0110)."""
        try:
            values = [int(ch, 16) for ch in payload.strip()]
        except ValueError as e:
            raise ArgumentError(f"not a hex payload: {payload!r}") from e
        bits = [(v >> shift) & 1 for v in values for shift in (3, 2, 1, 0)]
        return cls(np.array(bits, dtype=np.uint8))

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls(np.zeros(length, dtype=np.uint8))

    @classmethod
    def unpack(cls, data: bytes, length: int) -> "BitString":
        """Inverse of pack(); the last byte may carry padding bits."""
        if length < 0 or length > 8 * len(data):
            raise ArgumentError(f"cannot read {length} bits from {len(data)} bytes")
        raw = np.frombuffer(data, dtype=np.uint8)
        return cls(np.unpackbits(raw, bitorder="little")[:length])

    def pack(self) -> bytes:
        return np.packbits(self.bits, bitorder="little").tobytes()

    def padded(self, length: int) -> "BitString":
        """Zero-pad on the right to the given length."""
        if length < len(self):
            raise ArgumentError(f"cannot pad {len(self)} bits down to {length}")
        if length == len(self):
            return self
        out = np.zeros(length, dtype=np.uint8)
        out[: len(self)] = self.bits
        return BitString(out)

    def concat(self, other: "BitString") -> "BitString":
        return BitString(np.concatenate([self.bits, other.bits]))

    def __xor__(self, other: "BitString") -> "BitString":
        if len(self) != len(other):
            raise ArgumentError(f"length mismatch: {len(self)} vs {len(other)}")
        return BitString(self.bits ^ other.bits)

    def __len__(self) -> int:
        return int(self.bits.size)

    def __getitem__(self, index: int) -> int:
        return int(self.bits[index])

    def __iter__(self):
        return (int(b) for b in self.bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((len(self), self.pack()))

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __repr__(self) -> str:
        text = str(self)
        if len(text) > 32:
            text = text[:32] + "..."
        return f"BitString({text!r}, length={len(self)})"
