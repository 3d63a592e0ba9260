# ABOUTME: File I/O for packed little-endian bitstreams and the "N m" sidecar header.
# ABOUTME: Used by the raw extraction command and by the simulator's key output.

import logging
from pathlib import Path

from src.errors import ArgumentError
from src.sources.bits import BitString

logger = logging.getLogger(__name__)


def read_header(path: Path) -> tuple[int, int]:
    """
    Parse a sidecar header of the form "N m" (decimal).

    Raises:
        ArgumentError: If the header is malformed.
    """
    fields = path.read_text().split()
    if len(fields) != 2:
        raise ArgumentError(f"header {path} must contain exactly 'N m', got {fields}")
    try:
        n, m = int(fields[0]), int(fields[1])
    except ValueError as e:
        raise ArgumentError(f"header {path} is not decimal: {fields}") from e
    if n < 0 or m < 0:
        raise ArgumentError(f"header {path} has negative lengths: {n} {m}")
    return n, m


def write_header(path: Path, n: int, m: int) -> None:
    path.write_text(f"{n} {m}\n")


def read_bits(path: Path, length: int) -> BitString:
    """Read `length` bits from a packed file; the file must hold exactly ceil(length/8) bytes."""
    data = path.read_bytes()
    expected = (length + 7) // 8
    if len(data) != expected:
        raise ArgumentError(
            f"{path} holds {len(data)} bytes, expected {expected} for {length} bits"
        )
    return BitString.unpack(data, length)


def write_bits(path: Path, bits: BitString) -> None:
    path.write_bytes(bits.pack())
    logger.debug(f"Wrote {len(bits)} bits to {path}")
