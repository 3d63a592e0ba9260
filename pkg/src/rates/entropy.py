# ABOUTME: Single-round entropy arithmetic: binary entropy and the MDL violation-to-entropy bound.
# ABOUTME: All logarithms are base 2; entropies are in bits.

import math

from scipy.special import entr

from src.errors import DomainError
from src.sources.params import MdlParams

CLAMP_TOL = 1e-12

# Largest alpha = S_mu / mu_star a quantum device can reach.
ALPHA_MAX = (math.sqrt(2.0) - 1.0) / 2.0


def binary_entropy(x: float) -> float:
    """
    h(x) = -x log2 x - (1 - x) log2(1 - x), with 0 log 0 = 0.

    Raises:
        DomainError: If x lies outside [0, 1] by more than 1e-12.
    """
    if not math.isfinite(x) or x < -CLAMP_TOL or x > 1.0 + CLAMP_TOL:
        raise DomainError(f"binary entropy argument must lie in [0, 1], got {x}")
    p = min(max(x, 0.0), 1.0)
    return float((entr(p) + entr(1.0 - p)) / math.log(2.0))


def critical_violation(params: MdlParams) -> float:
    """s_c = mu_star (sqrt(2) - 1)/2, where the single-round bound reaches one bit."""
    return params.mu_star * ALPHA_MAX


def alpha_from_smu(s: float, params: MdlParams) -> float:
    """Minimal Eberhard violation implied by an MDL violation: s / mu_star."""
    if params.mu_star == 0.0:
        if s == 0.0:
            return 0.0
        raise DomainError("mu_star = 0: no violation can be converted")
    return s / params.mu_star


def _h_argument(s: float, params: MdlParams) -> float:
    mu_star = params.mu_star
    return 0.5 + math.sqrt(s * (s + mu_star)) / mu_star


def single_round_bound(s: float, params: MdlParams) -> float:
    """
    Lower bound on the output entropy of one round with MDL violation s.

    Returns:
        1 - h(1/2 + sqrt(s (s + mu_star)) / mu_star), clamped at one bit.

    Raises:
        DomainError: If s is negative, or positive while mu_star = 0.
    """
    if s < 0:
        raise DomainError(f"violation must be non-negative, got {s}")
    if params.mu_star == 0.0:
        if s == 0.0:
            return 0.0
        raise DomainError("mu_star = 0 admits no positive violation")
    u = min(_h_argument(s, params), 1.0)
    return 1.0 - binary_entropy(u)


def g_mu(s: float, params: MdlParams) -> float:
    """Piecewise single-round bound: exactly 1 from the critical violation onwards."""
    if s < 0:
        raise DomainError(f"violation must be non-negative, got {s}")
    if params.mu_star > 0.0 and s / params.mu_star >= ALPHA_MAX:
        return 1.0
    return single_round_bound(s, params)

