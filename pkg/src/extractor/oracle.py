# ABOUTME: Brute-force error oracle for the convolution extractor at toy input lengths.
# ABOUTME: Maximizes the seed-strong distance from uniform over a fixed family of flat sources.

import logging
import math
from itertools import combinations

import numpy as np
from numpy.typing import NDArray

from src.config import config
from src.errors import ArgumentError
from src.extractor.convolution import extraction_table
from src.sources.rng import RoundRandomness

logger = logging.getLogger(__name__)

MAX_ORACLE_BITS = 8
# Enumerate every flat source when there are at most this many.
EXHAUSTIVE_LIMIT = 20000


def flat_source_family(n: int, k: int, seed: int | None = None) -> NDArray[np.int64]:
    """
    Supports of the flat sources with 2^k elements over {0, ..., 2^n - 1}.

    All subsets when there are at most EXHAUSTIVE_LIMIT of them; otherwise every
    cyclic interval plus config.EXACT_ERROR_SUBSETS random subsets from a fixed seed.

    Returns:
        Array of shape (family size, 2^k), each row sorted, rows unique.
    """
    universe = 2**n
    size = 2**k
    if math.comb(universe, size) <= EXHAUSTIVE_LIMIT:
        rows = _all_subsets(universe, size)
    else:
        intervals = (np.arange(universe)[:, None] + np.arange(size)[None, :]) % universe
        master = config.EXACT_ERROR_SEED if seed is None else seed
        rng = RoundRandomness(master, "exact_error").child(n, k).generator()
        randoms = np.array(
            [np.sort(rng.choice(universe, size=size, replace=False))
             for _ in range(config.EXACT_ERROR_SUBSETS)],
            dtype=np.int64,
        ).reshape(-1, size)
        rows = np.vstack([np.sort(intervals, axis=1), randoms])
    return np.unique(rows, axis=0)


def _all_subsets(universe: int, size: int) -> NDArray[np.int64]:
    return np.array(list(combinations(range(universe), size)), dtype=np.int64).reshape(-1, size)


def seed_distances(table: NDArray[np.int64], support: NDArray[np.int64], m: int) -> NDArray[np.float64]:
    """
    Distance from uniform of the output for every fixed seed z, x uniform on `support`.

    Returns:
        D with D[z] = (1/2) sum_o |P(o | z) - 2^-m|.
    """
    universe = table.shape[1]
    outputs = 2**m
    codes = table[support, :] + outputs * np.arange(universe)[None, :]
    counts = np.bincount(codes.ravel(), minlength=universe * outputs).reshape(universe, outputs)
    probs = counts / support.size
    return 0.5 * np.abs(probs - 1.0 / outputs).sum(axis=1)


def exact_error(n: int, m: int, k1: int, k2: int) -> float:
    """
    Worst seed-strong error of conv_extract over flat sources of min-entropy k1 and k2.

    For a first source uniform on S1 and a seed uniform on S2 the error is the
    average over z in S2 of the output's distance from uniform given z.

    Raises:
        ArgumentError: If n exceeds MAX_ORACLE_BITS or the sizes are invalid.
    """
    if n < 1 or n > MAX_ORACLE_BITS:
        raise ArgumentError(f"exact oracle supports 1 <= N <= {MAX_ORACLE_BITS}, got {n}")
    if not 1 <= m <= n:
        raise ArgumentError(f"output length must satisfy 1 <= m <= N, got {m}")
    if not (0 <= k1 <= n and 0 <= k2 <= n):
        raise ArgumentError(f"entropies must lie in [0, N], got k1 = {k1}, k2 = {k2}")

    table = extraction_table(n, m)
    first = flat_source_family(n, k1)
    second = flat_source_family(n, k2)
    membership = np.zeros((second.shape[0], 2**n))
    np.put_along_axis(membership, second, 1.0, axis=1)

    distances = np.array([seed_distances(table, support, m) for support in first])
    # Row i, column j: error for first-source support i and seed support j.
    errors = distances @ membership.T / second.shape[1]
    worst = float(errors.max())
    logger.debug(
        f"exact_error N={n} m={m} k1={k1} k2={k2}: {worst} over "
        f"{first.shape[0]} x {second.shape[0]} source pairs"
    )
    return worst
