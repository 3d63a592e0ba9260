# ABOUTME: Min-tradeoff construction: statistic of a frequency distribution, tangent linearization, f_min.
# ABOUTME: Also the second-order EAT correction term zeta for a chosen cut point.

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import DomainError
from src.rates.entropy import critical_violation, g_mu
from src.sources.params import MdlParams

SUM_TOL = 1e-12
LOG2_NINE = math.log2(9.0)


class FrequencyDist(BaseModel):
    """Distribution over the three score classes C in {mu_min, 0, -mu_max}."""

    model_config = ConfigDict(frozen=True)

    p_win: float = Field(..., ge=0.0, le=1.0)
    p_lose: float = Field(..., ge=0.0, le=1.0)
    p_zero: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_sum(self) -> "FrequencyDist":
        total = self.p_win + self.p_lose + self.p_zero
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"frequencies must sum to 1, got {total}")
        return self

    @classmethod
    def from_counts(cls, wins: int, losses: int, zeros: int) -> "FrequencyDist":
        total = wins + losses + zeros
        if total <= 0:
            raise DomainError("cannot form frequencies from zero rounds")
        p_win, p_lose = wins / total, losses / total
        return cls(p_win=p_win, p_lose=p_lose, p_zero=max(0.0, 1.0 - p_win - p_lose))


def s_mu_of_freq(freq: FrequencyDist, params: MdlParams) -> float:
    """Average score mu_min p_win - mu_max p_lose."""
    return params.mu_min * freq.p_win - params.mu_max * freq.p_lose


def _check_cut(s_t: float, params: MdlParams) -> float:
    s_c = critical_violation(params)
    if not 0.0 < s_t < s_c:
        raise DomainError(f"cut point must lie in (0, {s_c}), got {s_t}")
    return s_c


def slope(s_t: float, params: MdlParams) -> float:
    """
    Derivative of g_mu at s_t.

    With u = 1/2 + sqrt(s(s + mu_star))/mu_star the derivative is
    log2(u/(1 - u)) (2s + mu_star) / (2 mu_star sqrt(s(s + mu_star))).
    """
    _check_cut(s_t, params)
    mu_star = params.mu_star
    root = math.sqrt(s_t * (s_t + mu_star))
    # log2(u / (1 - u)) = 2 atanh(2u - 1) / ln 2, stable near u = 1/2.
    log_ratio = 2.0 * math.atanh(2.0 * root / mu_star) / math.log(2.0)
    return log_ratio * (2.0 * s_t + mu_star) / (2.0 * mu_star * root)


def linearize(s_t: float, params: MdlParams) -> tuple[float, float]:
    """
    Tangent line of g_mu at the cut point.

    Returns:
        (a, b) with a = g'(s_t) and b = g(s_t) - a s_t.

    Raises:
        DomainError: If s_t is outside (0, s_c).
    """
    a = slope(s_t, params)
    return a, g_mu(s_t, params) - a * s_t


def f_min(s: float, s_t: float, params: MdlParams) -> float:
    """Min-tradeoff function: g_mu up to the cut point, its tangent beyond."""
    if s <= s_t:
        _check_cut(s_t, params)
        return g_mu(max(s, 0.0), params)
    a, b = linearize(s_t, params)
    return a * s + b


def zeta(s_t: float, eps_s: float, eps_ea: float, params: MdlParams) -> float:
    """
    Second-order correction 2 (log2 9 + a(s_t) mu_max) sqrt(1 - 2 log2(eps_s eps_ea)).

    Raises:
        DomainError: If an epsilon is outside (0, 1] or s_t is outside (0, s_c).
    """
    for name, eps in (("eps_s", eps_s), ("eps_ea", eps_ea)):
        if not 0.0 < eps <= 1.0:
            raise DomainError(f"{name} must lie in (0, 1], got {eps}")
    a = slope(s_t, params)
    return 2.0 * (LOG2_NINE + a * params.mu_max) * math.sqrt(1.0 - 2.0 * math.log2(eps_s * eps_ea))
