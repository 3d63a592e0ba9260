# ABOUTME: Entropy requirements of the convolution extractor and their lifts to the Markov model.
# ABOUTME: Solves for the longest key the protocol's entropy budgets can support.

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import ArgumentError
from src.sources.params import MdlParams
from src.sources.seed import seed_min_entropy

logger = logging.getLogger(__name__)

LOG2_THREE = math.log2(3.0)
# Errors are carried as log2(1/eps); below this exponent 2^-L would overflow.
_MIN_LOG_INV = -1000.0
# Slack for float rounding in the sum rule.
_TOL = 1e-9


def _log_inv(eps: float) -> float:
    return -math.log2(eps)


def _from_eps(data: Any, key: str, upper: float) -> Any:
    """Accept an error given either as `key` or as its log2(1/eps)."""
    if isinstance(data, dict) and key in data:
        data = dict(data)
        eps = data.pop(key)
        if not 0.0 < eps < upper:
            raise ValueError(f"{key} must lie in (0, {upper:g}), got {eps}")
        data["log_inv_eps"] = _log_inv(eps)
    return data


class ExtractorParams(BaseModel):
    """
    Classical extractor parameters: input lengths, output length, entropies and error.

    The error is stored as log_inv_eps = log2(1/eps_ext), so errors far below the
    smallest float stay representable. Pass either eps_ext or log_inv_eps.
    """

    model_config = ConfigDict(frozen=True)

    n1: int = Field(..., ge=1)
    d: int = Field(..., ge=0)
    m: int = Field(..., ge=1)
    k1: float = Field(..., ge=0.0)
    k2: float = Field(..., ge=0.0)
    log_inv_eps: float = Field(..., gt=0.0)

    @model_validator(mode="before")
    @classmethod
    def _accept_eps(cls, data: Any) -> Any:
        return _from_eps(data, "eps_ext", 1.0)

    @model_validator(mode="after")
    def _check_entropies(self) -> "ExtractorParams":
        if self.k1 > self.n1:
            raise ValueError("k1 cannot exceed the first input length")
        if self.k2 > self.d:
            raise ValueError("k2 cannot exceed the seed length")
        return self

    @property
    def eps_ext(self) -> float:
        return 2.0**-self.log_inv_eps


class LiftedParams(BaseModel):
    """Thresholds and error of the same extractor in the Markov model."""

    model_config = ConfigDict(frozen=True)

    k1: float
    k2: float
    log_inv_eps: float
    m: int = Field(..., ge=1)

    @model_validator(mode="before")
    @classmethod
    def _accept_eps(cls, data: Any) -> Any:
        return _from_eps(data, "eps", math.inf)

    @property
    def eps(self) -> float:
        if self.log_inv_eps < _MIN_LOG_INV:
            return math.inf
        return 2.0**-self.log_inv_eps

    @property
    def feasible(self) -> bool:
        return self.log_inv_eps > 0.0


@dataclass
class ClassicalRequirement:
    """Per-source min-entropy the convolution extractor is assumed to need."""

    k1: float
    k2: float
    total: float
    feasible: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class SmoothRequirement:
    """Smooth min-entropy thresholds and the final distance from uniform."""

    k1_req: float
    k2_req: float
    final_error: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _sum_rule(n: int, m: int, log_inv_eps: float) -> float:
    return n + 2 * m + 2 * log_inv_eps


def classical_requirement(n: int, m: int, eps: float) -> ClassicalRequirement:
    """
    Assumed sufficient condition for conv_extract with error eps.

    The sum rule k1 + k2 >= N + 2m + 2 log2(1/eps) is split symmetrically. It is an
    assumption about this construction, checked only at toy sizes by exact_error.
    """
    if n < 1 or m < 1:
        raise ArgumentError(f"need N >= 1 and m >= 1, got N = {n}, m = {m}")
    if not 0.0 < eps <= 1.0:
        raise ArgumentError(f"eps must lie in (0, 1], got {eps}")
    total = _sum_rule(n, m, _log_inv(eps))
    k = total / 2
    return ClassicalRequirement(k1=k, k2=k, total=total, feasible=k <= n)


def markov_lift(p: ExtractorParams) -> LiftedParams:
    """
    Parameters of the classical extractor as a Markov-model extractor.

    Returns:
        (k1 + log2(1/eps), k2 + log2(1/eps), sqrt(3 eps 2^(m - 2))), the error
        carried as its log2(1/.).
    """
    shift = p.log_inv_eps
    log_inv_lifted = 0.5 * (p.log_inv_eps - LOG2_THREE - (p.m - 2))
    lifted = LiftedParams(k1=p.k1 + shift, k2=p.k2 + shift, log_inv_eps=log_inv_lifted, m=p.m)
    if not lifted.feasible:
        logger.warning(f"Markov lift error 2^{-log_inv_lifted:.4g} >= 1 for m = {p.m}")
    return lifted


def smooth_requirement(lifted: LiftedParams, eps_s: float) -> SmoothRequirement:
    """Smooth min-entropy thresholds k + log2(1/eps) + 1 and final error 6 (eps_s + eps)."""
    shift = lifted.log_inv_eps + 1.0
    return SmoothRequirement(
        k1_req=lifted.k1 + shift,
        k2_req=lifted.k2 + shift,
        final_error=6.0 * (eps_s + lifted.eps),
    )


def classical_log_inv_error(eps_ext: float, m: int) -> float:
    """
    log2(1/eps_c) of the classical error whose Markov lift has error eps_ext at length m.

    eps_c = eps_ext^2 / (3 * 2^(m - 2)) underflows for long keys; its logarithm does not.
    """
    return 2.0 * _log_inv(eps_ext) + LOG2_THREE + (m - 2)


def working_lengths(n: int, d: int) -> tuple[int, int]:
    """
    Extractor input length N and the number of seed bits used.

    N is 2n, the length of A^n B^n. A longer seed is cut to its first 2n bits, which
    keeps its per-pair min-entropy; a shorter one is zero-padded to N.
    """
    n_bits = 2 * n
    return n_bits, min(d, n_bits)


def _fits(
    m: int, n_bits: int, budget1: float, budget2: float, eps_ext: float, eps_s: float
) -> bool:
    # The device side holds at most n * eta < N/2 bits, so a symmetric split never
    # fits; the seed carries the rest of the sum rule, up to its length.
    log_inv_c = classical_log_inv_error(eps_ext, m)
    total = _sum_rule(n_bits, m, log_inv_c)

    empty = ExtractorParams(n1=n_bits, d=n_bits, m=m, k1=0.0, k2=0.0, log_inv_eps=log_inv_c)
    overhead = smooth_requirement(markov_lift(empty), eps_s).k1_req
    k1 = min(budget1 - overhead, float(n_bits))
    if k1 < 0 or budget2 - overhead < 0:
        return False
    k2 = max(total - k1, 0.0)
    if k2 > n_bits + _TOL:
        return False

    candidate = ExtractorParams(
        n1=n_bits, d=n_bits, m=m, k1=k1, k2=min(k2, float(n_bits)), log_inv_eps=log_inv_c
    )
    req = smooth_requirement(markov_lift(candidate), eps_s)
    return req.k1_req <= budget1 + _TOL and req.k2_req <= budget2 + _TOL


def output_length(
    n: int,
    eta: float,
    d: int,
    params: MdlParams,
    eps_ext: float,
    eps_s: float,
) -> int:
    """
    Longest key the two entropy budgets support.

    The device budget is n * eta (smooth min-entropy of A^n B^n); the seed budget is
    the min-entropy bound of the first min(d, 2n) seed bits. Each budget is reduced by
    the Markov-lift and smoothing overheads, and the remainder must satisfy the sum
    rule at N = 2n. The result is nondecreasing in eta and in d, and in n whenever
    d >= 2n; with a fixed seed shorter than 2n, extra rounds add less entropy than
    the padding costs.

    Returns:
        The largest feasible m in [1, N], or 0 when no key can be extracted.
    """
    if n < 1:
        raise ArgumentError(f"n must be at least 1, got {n}")
    if d < 0 or d % 2:
        raise ArgumentError(f"seed length must be even and non-negative, got {d}")
    if not 0.0 < eps_ext < 1.0:
        raise ArgumentError(f"eps_ext must lie in (0, 1), got {eps_ext}")
    if eta <= 0:
        return 0
    n_bits, d_used = working_lengths(n, d)
    budget1 = n * eta
    budget2 = seed_min_entropy(d_used, params)

    if not _fits(1, n_bits, budget1, budget2, eps_ext, eps_s):
        logger.info(f"No extraction possible (n = {n}, eta = {eta:.6g}, d = {d})")
        return 0
    lo, hi = 1, n_bits
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _fits(mid, n_bits, budget1, budget2, eps_ext, eps_s):
            lo = mid
        else:
            hi = mid - 1
    logger.info(
        f"Output length {lo} bits (n = {n}, eta = {eta:.6g}, d = {d}, "
        f"final error {6.0 * (eps_s + eps_ext):.3g})"
    )
    return lo
