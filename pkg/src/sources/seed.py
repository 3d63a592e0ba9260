# ABOUTME: Draws the extractor seed Z^d from an MDL source and bounds its min-entropy.
# ABOUTME: Also provides a plug-in Shannon estimate of pair entropy for sanity checks.

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.stats import entropy

from src.errors import ArgumentError
from src.sources.bits import BitString
from src.sources.models import SourceModel, sample_block
from src.sources.params import MdlParams
from src.sources.rng import RoundRandomness

logger = logging.getLogger(__name__)


def draw_seed(
    model: SourceModel,
    d: int,
    rng: RoundRandomness,
    history: Sequence[int] = (),
) -> BitString:
    """
    Draw a d-bit seed, two bits (x, y) per source emission.

    Args:
        model: Source the seed is drawn from.
        d: Seed length in bits; must be even.
        rng: Randomness for the seed stream (independent of the round stream).
        history: Pairs the source already emitted, so its state continues after them.

    Returns:
        BitString of length d.

    Raises:
        ArgumentError: If d is odd or negative.
    """
    if d < 0 or d % 2:
        raise ArgumentError(f"seed length must be even and non-negative, got {d}")
    if d == 0:
        return BitString.zeros(0)
    state = model.state_after(history)
    if model.is_replay:
        # Replays continue the recorded script where the rounds stopped.
        pairs = np.array(
            [int(np.argmax(model.distribution(state + k))) for k in range(d // 2)],
            dtype=np.int64,
        )
    else:
        pairs, _ = sample_block(model, rng, 0, d // 2, state=state)
    bits = np.empty(d, dtype=np.uint8)
    bits[0::2] = pairs // 2
    bits[1::2] = pairs % 2
    logger.debug(f"Drew {d}-bit seed from {model.kind.value} source")
    return BitString(bits)


def seed_min_entropy(d: int, params: MdlParams) -> float:
    """
    Lower bound on H_min(Z^d) for a seed drawn from a mu-MDL source.

    Returns:
        -(d/2) * log2(mu_max) bits.
    """
    if d < 0 or d % 2:
        raise ArgumentError(f"seed length must be even and non-negative, got {d}")
    if d == 0:
        return 0.0
    return max(0.0, -(d / 2) * math.log2(params.mu_max))


def shannon_pair_entropy(bits: BitString) -> float:
    """
    Plug-in Shannon entropy (bits) of consecutive non-overlapping bit pairs.

    The estimate is at most 2; a trailing unpaired bit is ignored.
    """
    usable = len(bits) - len(bits) % 2
    if usable == 0:
        return 0.0
    arr = bits.bits[:usable].reshape(-1, 2).astype(np.int64)
    counts = np.bincount(2 * arr[:, 0] + arr[:, 1], minlength=4)
    return float(entropy(counts, base=2))
