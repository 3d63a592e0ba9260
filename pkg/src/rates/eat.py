# ABOUTME: Finite-size entropy rate from entropy accumulation: the optimal cut point and eta_opt.
# ABOUTME: Also the Hoeffding completeness bound and curve helpers for rate sweeps.

import logging
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy.optimize import minimize_scalar

from src.config import config
from src.errors import ArgumentError, DomainError
from src.rates.entropy import critical_violation, g_mu
from src.rates.tradeoff import f_min, linearize, zeta
from src.sources.params import MdlParams

logger = logging.getLogger(__name__)

# Cut points stay this fraction of mu_star away from both ends of (0, s_c).
EDGE_MARGIN = 1e-12


class EatParams(BaseModel):
    """Protocol parameters entering the entropy-accumulation bound."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    s_exp: float
    delta_est: float = Field(..., gt=0.0)
    eps_s: float = Field(..., gt=0.0, lt=1.0)
    eps_ea: float = Field(..., gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _check_threshold(self) -> "EatParams":
        if not self.delta_est < self.s_exp:
            raise ValueError("delta_est must be smaller than s_exp")
        return self

    @property
    def threshold(self) -> float:
        """Abort threshold S_exp - delta_est."""
        return self.s_exp - self.delta_est

    @classmethod
    def of(cls, **values: Any) -> "EatParams":
        """Build params, reporting invalid values as ArgumentError."""
        try:
            return cls(**values)
        except ValidationError as e:
            raise ArgumentError(f"invalid EAT parameters: {e}") from e


@dataclass
class RateResult:
    """Optimal finite-size rate for one parameter point."""

    eta_opt: float
    s_t_star: float
    hmin_bound: float
    a_star: float
    b_star: float
    zeta_star: float
    n: int
    s_exp: float
    delta_est: float

    @property
    def positive(self) -> bool:
        return self.eta_opt > 0.0

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _cut_grid(params: MdlParams, points: int) -> np.ndarray:
    s_c = critical_violation(params)
    lo = EDGE_MARGIN * params.mu_star
    hi = s_c - EDGE_MARGIN * params.mu_star
    # Linear spacing covers the bulk, geometric spacing resolves optima near zero.
    grid = np.union1d(np.linspace(lo, hi, points), np.geomspace(lo, hi, points))
    return grid


def optimize_cut(
    n: int,
    s: float,
    eps_s: float,
    eps_ea: float,
    params: MdlParams,
    s_exp: float | None = None,
    delta_est: float | None = None,
    grid_points: int | None = None,
) -> RateResult:
    """
    Maximize f_min(s, s_t) - zeta(s_t)/sqrt(n) over cut points s_t in (0, s_c).

    A grid scan brackets the maximum, then golden-section search refines it.

    Args:
        n: Number of rounds.
        s: Certified violation level S_exp - delta_est (may be zero).
        eps_s: Smoothing parameter.
        eps_ea: Entropy-accumulation abort parameter.
        params: MDL box.
        s_exp: Reported in the result (default: s).
        delta_est: Reported in the result (default: 0).
        grid_points: Points per grid family (default: config.RATE_GRID_POINTS).

    Returns:
        RateResult; eta_opt may be negative.

    Raises:
        DomainError: If mu_star = 0 (no cut point exists) or s is negative.
    """
    if n < 1:
        raise ArgumentError(f"n must be at least 1, got {n}")
    if s < 0:
        raise DomainError(f"violation level must be non-negative, got {s}")
    if params.mu_star == 0.0:
        raise DomainError("mu_min = 0 certifies no violation; the rate is undefined")

    root_n = math.sqrt(n)

    def objective(s_t: float) -> float:
        return f_min(s, s_t, params) - zeta(s_t, eps_s, eps_ea, params) / root_n

    grid = _cut_grid(params, grid_points or config.RATE_GRID_POINTS)
    values = np.array([objective(float(t)) for t in grid])
    k = int(np.argmax(values))
    best_t, best_value = float(grid[k]), float(values[k])

    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, grid.size - 1)])
    try:
        if 0 < k < grid.size - 1:
            refined = minimize_scalar(
                lambda t: -objective(t),
                bracket=(lo, best_t, hi),
                method="golden",
                tol=config.RATE_GOLDEN_TOL,
            )
        else:
            refined = minimize_scalar(lambda t: -objective(t), bounds=(lo, hi), method="bounded")
        t_ref = float(refined.x)
        if lo <= t_ref <= hi and -float(refined.fun) > best_value:
            best_t, best_value = t_ref, -float(refined.fun)
    except (ValueError, DomainError) as e:
        logger.debug(f"Golden refinement skipped, keeping grid optimum: {e}")

    a, b = linearize(best_t, params)
    z = zeta(best_t, eps_s, eps_ea, params)
    result = RateResult(
        eta_opt=best_value,
        s_t_star=best_t,
        hmin_bound=n * best_value,
        a_star=a,
        b_star=b,
        zeta_star=z,
        n=n,
        s_exp=s if s_exp is None else s_exp,
        delta_est=0.0 if delta_est is None else delta_est,
    )
    if not result.positive:
        logger.warning(f"Non-positive rate eta_opt = {best_value:.6g} (n = {n}, s = {s:.6g})")
    return result


def eta_opt(eat: EatParams, params: MdlParams, grid_points: int | None = None) -> RateResult:
    """
    Optimal entropy rate for a protocol configuration.

    The total smooth min-entropy certified on non-abort is hmin_bound = n * eta_opt.
    """
    return optimize_cut(
        eat.n,
        eat.threshold,
        eat.eps_s,
        eat.eps_ea,
        params,
        s_exp=eat.s_exp,
        delta_est=eat.delta_est,
        grid_points=grid_points,
    )


def asymptotic_rate(s: float, params: MdlParams) -> float:
    """Limit of eta_opt as n grows: the single-round bound itself."""
    return g_mu(s, params)


def rate_curve(
    n: int,
    delta_est: float,
    eps_s: float,
    eps_ea: float,
    params: MdlParams,
    s_exp_grid: Sequence[float],
) -> list[RateResult]:
    """
    eta_opt along a grid of expected violations.

    Points with s_exp <= delta_est are evaluated at violation level max(s_exp - delta_est, 0),
    so the curve starts where the protocol can only just be run.
    """
    results = []
    for s_exp in s_exp_grid:
        results.append(
            optimize_cut(
                n,
                max(s_exp - delta_est, 0.0),
                eps_s,
                eps_ea,
                params,
                s_exp=s_exp,
                delta_est=delta_est,
            )
        )
    return results


def completeness_bound(n: int, delta_est: float, params: MdlParams) -> float:
    """
    Probability that an honest device aborts: exp(-2 n delta^2 / (mu_min + mu_max)^2).

    Raises:
        ArgumentError: If n < 1.
        DomainError: If delta_est is negative.
    """
    if n < 1:
        raise ArgumentError(f"n must be at least 1, got {n}")
    if delta_est < 0:
        raise DomainError(f"delta_est must be non-negative, got {delta_est}")
    spread = params.mu_min + params.mu_max
    return math.exp(-2.0 * n * delta_est**2 / spread**2)


def hoeffding_delta(n: int, target: float, params: MdlParams) -> float:
    """The delta_est for which completeness_bound(n, delta_est) equals target."""
    if n < 1:
        raise ArgumentError(f"n must be at least 1, got {n}")
    if not 0.0 < target <= 1.0:
        raise DomainError(f"target probability must lie in (0, 1], got {target}")
    spread = params.mu_min + params.mu_max
    return spread * math.sqrt(math.log(1.0 / target) / (2.0 * n))
