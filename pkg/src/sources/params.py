# ABOUTME: Weak-source parameter records: Santha-Vazirani bias and MDL probability box.
# ABOUTME: Includes the SV to MDL conversion and admissibility checks for input distributions.

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.config import config
from src.errors import ConstraintError


class SvParams(BaseModel):
    """Bias of a Santha-Vazirani source: every bit is 0 with probability in [1/2-mu, 1/2+mu]."""

    model_config = ConfigDict(frozen=True)

    mu: float = Field(..., gt=0.0, lt=0.5)


class MdlParams(BaseModel):
    """
    Box (mu_min, mu_max) constraining every conditional input-pair probability.

    Closed endpoints are admitted: mu_min = 0 is the degenerate box on which no
    Bell violation is certifiable, and (1/4, 1/4) is the uniform source.
    """

    model_config = ConfigDict(frozen=True)

    mu_min: float = Field(..., ge=0.0, le=0.25)
    mu_max: float = Field(..., ge=0.25, le=1.0)

    @model_validator(mode="after")
    def _check_box(self) -> "MdlParams":
        if self.mu_min > self.mu_max:
            raise ValueError("mu_min must not exceed mu_max")
        # A normalized distribution must exist inside the box.
        if 4 * self.mu_min > 1 or 4 * self.mu_max < 1:
            raise ValueError("no normalized distribution lies in the mu box")
        return self

    @property
    def mu_star(self) -> float:
        return self.mu_min * self.mu_max

    @classmethod
    def of(cls, mu_min: float, mu_max: float) -> "MdlParams":
        """Build params, reporting an infeasible box as ConstraintError."""
        try:
            return cls(mu_min=mu_min, mu_max=mu_max)
        except ValidationError as e:
            raise ConstraintError(f"infeasible MDL box ({mu_min}, {mu_max}): {e}") from e

    @classmethod
    def uniform(cls) -> "MdlParams":
        return cls(mu_min=0.25, mu_max=0.25)


def sv_to_mdl(sv: SvParams) -> MdlParams:
    """
    Convert an SV bias into the MDL box a pair of its bits satisfies.

    Args:
        sv: Santha-Vazirani bias.

    Returns:
        MdlParams with ((1/2 - mu)^2, (1/2 + mu)^2).
    """
    return MdlParams(mu_min=(0.5 - sv.mu) ** 2, mu_max=(0.5 + sv.mu) ** 2)


def as_input_distribution(
    inputs: ArrayLike,
    params: MdlParams,
    tol: float | None = None,
) -> NDArray[np.float64]:
    """
    Validate an input distribution P_XY against the mu box.

    Args:
        inputs: Four probabilities, either flat in order (00, 01, 10, 11) or a 2x2 table [x, y].
        params: MDL box the distribution must lie in.
        tol: Slack on the box and on normalization (default: config.NORMALIZATION_TOL).

    Returns:
        A read-only 2x2 array indexed [x, y].

    Raises:
        ConstraintError: If any entry leaves the box or the entries do not sum to one.
    """
    slack = config.NORMALIZATION_TOL if tol is None else tol
    q = np.asarray(inputs, dtype=np.float64).reshape(2, 2)
    if not np.all(np.isfinite(q)):
        raise ConstraintError("input distribution has non-finite entries")
    if not math.isclose(float(q.sum()), 1.0, rel_tol=0.0, abs_tol=slack):
        raise ConstraintError(f"input distribution sums to {q.sum()}, not 1")
    if np.any(q < params.mu_min - slack) or np.any(q > params.mu_max + slack):
        raise ConstraintError(
            f"input distribution {q.ravel().tolist()} leaves the box "
            f"[{params.mu_min}, {params.mu_max}]"
        )
    q = q.copy()
    q.setflags(write=False)
    return q


def uniform_inputs() -> NDArray[np.float64]:
    q = np.full((2, 2), 0.25)
    q.setflags(write=False)
    return q
