# ABOUTME: Maximal achievable single-round entropy for an MDL box (optimizer followed by g_mu).
# ABOUTME: Generates the curves along the two extreme mu_max families used in sweeps.

import logging
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from typing import Any, Literal

from src.errors import ConstraintError
from src.quantum.optimizer import OptimizerConfig, optimize_s_tilde
from src.rates.entropy import g_mu
from src.sources.params import MdlParams

logger = logging.getLogger(__name__)

Family = Literal["one_minus_three", "one_third_rest"]


@dataclass
class MaxEntropyPoint:
    """Certified violation and the entropy it guarantees for one mu box."""

    mu_min: float
    mu_max: float
    s_tilde_star: float
    entropy_bound: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def family_mu_max(mu_min: float, family: Family) -> float:
    """
    mu_max paired with mu_min in a sweep family.

    one_minus_three: mu_max = 1 - 3 mu_min (one pair takes all remaining mass).
    one_third_rest: mu_max = (1 - mu_min)/3 (the mass left by one minimal pair is shared).
    """
    if family == "one_minus_three":
        return 1.0 - 3.0 * mu_min
    if family == "one_third_rest":
        return (1.0 - mu_min) / 3.0
    raise ConstraintError(f"unknown mu_max family: {family}")


def max_entropy_bound(params: MdlParams, cfg: OptimizerConfig | None = None) -> MaxEntropyPoint:
    """Lower bound on the maximal single-round entropy: g_mu at the optimized S~*."""
    result = optimize_s_tilde(params, cfg)
    s_star = max(result.value, 0.0)
    point = MaxEntropyPoint(
        mu_min=params.mu_min,
        mu_max=params.mu_max,
        s_tilde_star=result.value,
        entropy_bound=g_mu(s_star, params),
    )
    logger.info(
        f"Max entropy at mu = ({params.mu_min}, {params.mu_max}): "
        f"S~* = {point.s_tilde_star:.6g}, bound = {point.entropy_bound:.6g}"
    )
    return point


def max_entropy_curve(
    mu_min_grid: Sequence[float],
    family: Family,
    cfg: OptimizerConfig | None = None,
) -> list[MaxEntropyPoint]:
    """
    max_entropy_bound along one family.

    Raises:
        ConstraintError: If a grid point gives an infeasible box.
    """
    return [
        max_entropy_bound(MdlParams.of(mu_min, family_mu_max(mu_min, family)), cfg)
        for mu_min in mu_min_grid
    ]
