# ABOUTME: Two-source extractor over GF(2): cyclic convolution of the inputs truncated to m bits.
# ABOUTME: Exact integer kernel for short inputs, FFT kernel for protocol-sized inputs.

import logging

import numpy as np
from numpy.typing import NDArray
from scipy import fft

from src.errors import ArgumentError
from src.sources.bits import BitString

logger = logging.getLogger(__name__)

# Above this length the O(N log N) FFT kernel replaces direct convolution.
DIRECT_LIMIT = 2048


def _check(x: BitString, z: BitString, m: int) -> int:
    n = len(x)
    if len(z) != n:
        raise ArgumentError(f"extractor inputs differ in length: {n} vs {len(z)}")
    if m < 1 or m > n:
        raise ArgumentError(f"output length m must satisfy 1 <= m <= N = {n}, got {m}")
    return n


def cyclic_counts(x: NDArray[np.uint8], z: NDArray[np.uint8]) -> NDArray[np.int64]:
    """Integer cyclic convolution sum_i x_i z_{(j - i) mod N} for every j."""
    n = x.size
    if n <= DIRECT_LIMIT:
        linear = np.convolve(x.astype(np.int64), z.astype(np.int64))
        out = linear[:n].copy()
        out[: n - 1] += linear[n:]
        return out
    spectrum = fft.rfft(x.astype(np.float64)) * fft.rfft(z.astype(np.float64))
    return np.rint(fft.irfft(spectrum, n=n)).astype(np.int64)


def conv_extract(x: BitString, z: BitString, m: int) -> BitString:
    """
    Extract m bits as the first m coordinates of the GF(2) cyclic convolution x (*) z.

    Args:
        x: First source, length N.
        z: Second source (seed), length N.
        m: Output length, 1 <= m <= N.

    Returns:
        BitString with bit j = XOR_i x_i z_{(j - i) mod N}.

    Raises:
        ArgumentError: On length mismatch or m outside [1, N].
    """
    n = _check(x, z, m)
    counts = cyclic_counts(x.bits, z.bits)
    logger.debug(f"Extracted {m} of {n} convolution bits")
    return BitString((counts[:m] & 1).astype(np.uint8))


def extraction_table(n: int, m: int) -> NDArray[np.int64]:
    """
    Outputs of conv_extract for every input pair, as integers.

    Inputs and outputs are read little-endian (bit i has weight 2^i).

    Returns:
        Array T with T[x, z] = output for x, z in range(2^n).
    """
    if n < 1 or m < 1 or m > n:
        raise ArgumentError(f"invalid table size N = {n}, m = {m}")
    values = np.arange(2**n)
    bits = ((values[:, None] >> np.arange(n)) & 1).astype(np.int64)
    table = np.zeros((2**n, 2**n), dtype=np.int64)
    for j in range(m):
        # shifted[z, i] = z_{(j - i) mod N}
        shifted = bits[:, (j - np.arange(n)) % n]
        table |= ((bits @ shifted.T) & 1) << j
    return table
