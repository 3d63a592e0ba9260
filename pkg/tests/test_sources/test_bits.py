# ABOUTME: Tests for the BitString value type.
# ABOUTME: Validates parsing, packing order, padding and XOR.

import numpy as np
import pytest

from src.errors import ArgumentError
from src.sources.bits import BitString


class TestBitString:
    """Tests for BitString."""

    def test_from_str(self):
        """Parsing keeps the written order."""
        bits = BitString.from_str("0110")
        assert list(bits) == [0, 1, 1, 0]
        assert str(bits) == "0110"

    def test_from_hex_msb_first(self):
        """Each hex digit expands to four bits, most significant first."""
        assert str(BitString.from_hex("6")) == "0110"
        assert str(BitString.from_hex("a1")) == "10100001"

    def test_rejects_non_bits(self):
        """Values other than 0 and 1 are rejected."""
        with pytest.raises(ArgumentError):
            BitString.from_iterable([0, 2, 1])
        with pytest.raises(ArgumentError):
            BitString.from_str("012")
        with pytest.raises(ArgumentError):
            BitString.from_hex("xyz")

    def test_pack_little_endian(self):
        """Bit i of the string is bit i mod 8 of byte i // 8."""
        bits = BitString.from_str("1000000001")
        assert bits.pack() == bytes([0b00000001, 0b00000010])

    def test_unpack_inverts_pack(self):
        """unpack(pack(b), len(b)) == b."""
        bits = BitString.from_str("1101001110")
        assert BitString.unpack(bits.pack(), len(bits)) == bits

    def test_unpack_too_short(self):
        """Asking for more bits than the data holds is an error."""
        with pytest.raises(ArgumentError):
            BitString.unpack(b"\x00", 9)

    def test_padded(self):
        """Padding appends zeros; shrinking is an error."""
        bits = BitString.from_str("11")
        assert str(bits.padded(5)) == "11000"
        assert bits.padded(2) is bits
        with pytest.raises(ArgumentError):
            bits.padded(1)

    def test_xor_and_concat(self):
        """XOR is bitwise; concat appends."""
        a, b = BitString.from_str("1100"), BitString.from_str("1010")
        assert str(a ^ b) == "0110"
        assert str(a.concat(b)) == "11001010"
        with pytest.raises(ArgumentError):
            a ^ BitString.from_str("1")

    def test_immutable_storage(self):
        """The backing array is read-only and copied from the input."""
        raw = np.array([1, 0, 1], dtype=np.uint8)
        bits = BitString(raw)
        raw[0] = 0
        assert bits[0] == 1
        with pytest.raises(ValueError):
            bits.bits[0] = 0

    def test_equality_and_hash(self):
        """Equal strings compare and hash equal."""
        a, b = BitString.from_str("101"), BitString.from_str("101")
        assert a == b
        assert hash(a) == hash(b)
        assert a != BitString.from_str("1010")

    def test_zeros_and_empty(self):
        """zeros(0) is empty and packs to no bytes."""
        assert len(BitString.zeros(0)) == 0
        assert BitString.zeros(0).pack() == b""
        assert str(BitString.zeros(3)) == "000"
