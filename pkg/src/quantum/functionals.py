# ABOUTME: Linear Bell functionals over behaviors: CHSH, Eberhard, the MDL functional and its worst case.
# ABOUTME: Every functional is a coefficient table so the same data drives evaluation and Bell operators.

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.errors import ArgumentError
from src.quantum.behavior import Behavior
from src.sources.params import MdlParams, as_input_distribution

CoefficientMode = Literal["conditional", "joint"]

# (a, b, x, y) entries scored by the MDL winning function.
WIN_ENTRY = (0, 0, 0, 0)
LOSS_ENTRIES = ((0, 1, 0, 1), (1, 0, 1, 0), (0, 0, 1, 1))


@dataclass(frozen=True, eq=False)
class BellCoefficients:
    """
    Coefficients c[a, b, x, y] of a linear functional.

    In conditional mode the value is sum c * P(ab|xy). In joint mode it is
    sum c * P(ab|xy) * w(xy), where w is the input weighting passed to
    evaluate(), else the table's own `weights`, else uniform 1/4.
    """

    c: NDArray[np.float64]
    mode: CoefficientMode = "conditional"
    weights: NDArray[np.float64] | None = None

    def __post_init__(self) -> None:
        table = np.array(self.c, dtype=np.float64)
        if table.shape != (2, 2, 2, 2):
            raise ArgumentError(f"coefficients must have shape (2, 2, 2, 2), got {table.shape}")
        if not np.all(np.isfinite(table)):
            raise ArgumentError("coefficients must be finite")
        if self.mode not in ("conditional", "joint"):
            raise ArgumentError(f"unknown coefficient mode: {self.mode}")
        table.setflags(write=False)
        object.__setattr__(self, "c", table)
        if self.weights is not None:
            w = np.array(self.weights, dtype=np.float64).reshape(2, 2)
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)

    def effective(self, inputs: ArrayLike | None = None) -> NDArray[np.float64]:
        """Conditional-form coefficients with any input weighting folded in."""
        if self.mode == "conditional":
            return self.c
        if inputs is not None:
            w = np.asarray(inputs, dtype=np.float64).reshape(2, 2)
        elif self.weights is not None:
            w = self.weights
        else:
            w = np.full((2, 2), 0.25)
        return self.c * w[np.newaxis, np.newaxis, :, :]

    def evaluate(self, behavior: Behavior, inputs: ArrayLike | None = None) -> float:
        return float(np.sum(self.effective(inputs) * behavior.p))

    def relabel_outcomes(self) -> "BellCoefficients":
        """Coefficients for the behavior with every outcome flipped (a -> 1-a, b -> 1-b)."""
        return BellCoefficients(self.c[::-1, ::-1, :, :], self.mode, self.weights)


def winning_value(a: int, b: int, x: int, y: int, params: MdlParams) -> float:
    """
    MDL winning function w(a, b, x, y).

    Returns:
        mu_min on (0,0,0,0), -mu_max on (0,1,0,1), (1,0,1,0), (0,0,1,1), else 0.
    """
    entry = (a, b, x, y)
    if any(v not in (0, 1) for v in entry):
        raise ArgumentError(f"winning function arguments must be bits, got {entry}")
    if entry == WIN_ENTRY:
        return params.mu_min
    if entry in LOSS_ENTRIES:
        return -params.mu_max
    return 0.0


def winning_table(params: MdlParams) -> NDArray[np.float64]:
    table = np.zeros((2, 2, 2, 2))
    table[WIN_ENTRY] = params.mu_min
    for entry in LOSS_ENTRIES:
        table[entry] = -params.mu_max
    return table


def chsh_coefficients() -> BellCoefficients:
    """(-1)^(a + b + xy) in conditional form."""
    a, b, x, y = np.indices((2, 2, 2, 2))
    return BellCoefficients(((-1.0) ** (a + b + x * y)).astype(np.float64))


def eberhard_coefficients() -> BellCoefficients:
    table = np.zeros((2, 2, 2, 2))
    table[WIN_ENTRY] = 1.0
    for entry in LOSS_ENTRIES:
        table[entry] = -1.0
    return BellCoefficients(table)


def s_mu_coefficients(params: MdlParams, inputs: ArrayLike) -> BellCoefficients:
    """MDL functional for a fixed admissible input distribution."""
    q = as_input_distribution(inputs, params)
    return BellCoefficients(winning_table(params), mode="joint", weights=q)


def worst_case_weights(params: MdlParams) -> NDArray[np.float64]:
    """mu_min on the winning input pair 00 and mu_max on the others."""
    return np.array([[params.mu_min, params.mu_max], [params.mu_max, params.mu_max]])


def s_tilde_coefficients(params: MdlParams) -> BellCoefficients:
    """Source-independent lower bound of the MDL functional, in joint form."""
    return BellCoefficients(winning_table(params), mode="joint", weights=worst_case_weights(params))


def chsh_beta(behavior: Behavior) -> float:
    return chsh_coefficients().evaluate(behavior)


def eberhard_alpha(behavior: Behavior) -> float:
    """alpha = P(00|00) - P(01|01) - P(10|10) - P(00|11)."""
    return eberhard_coefficients().evaluate(behavior)


def s_mu(behavior: Behavior, inputs: ArrayLike, params: MdlParams) -> float:
    """
    MDL Bell value for an input distribution inside the mu box.

    Raises:
        ConstraintError: If the input distribution leaves the box.
    """
    return s_mu_coefficients(params, inputs).evaluate(behavior)


def s_mu_tilde(behavior: Behavior, params: MdlParams) -> float:
    """mu_min^2 P(00|00) - mu_max^2 (P(01|01) + P(10|10) + P(00|11))."""
    return s_tilde_coefficients(params).evaluate(behavior)
