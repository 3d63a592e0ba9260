# ABOUTME: Exhaustive local-hidden-variable oracle over the 16 deterministic strategies.
# ABOUTME: Maximizes the MDL functional jointly over strategies and vertices of the input box.

import itertools
import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.errors import ConstraintError
from src.quantum.behavior import Behavior
from src.quantum.functionals import BellCoefficients, winning_table
from src.sources.params import MdlParams

logger = logging.getLogger(__name__)

VERTEX_TOL = 1e-12

DeterministicStrategy = tuple[tuple[int, int], tuple[int, int]]


def deterministic_strategies() -> list[DeterministicStrategy]:
    """All (alice outputs per x, bob outputs per y) pairs, in lexicographic order."""
    outputs = list(itertools.product((0, 1), repeat=2))
    return [(alice, bob) for alice in outputs for bob in outputs]


def box_vertices(mu_min: float, mu_max: float) -> NDArray[np.float64]:
    """
    Vertices of {q in the 4-simplex : mu_min <= q_i <= mu_max}.

    Each vertex has three coordinates on a bound; the fourth is fixed by normalization.

    Returns:
        Array of shape (k, 4) in pair order 00, 01, 10, 11, duplicates removed.

    Raises:
        ConstraintError: If the box contains no normalized distribution.
    """
    found: list[NDArray[np.float64]] = []
    for free in range(4):
        for bounds in itertools.product((mu_min, mu_max), repeat=3):
            q = np.empty(4)
            q[[i for i in range(4) if i != free]] = bounds
            q[free] = 1.0 - sum(bounds)
            if mu_min - VERTEX_TOL <= q[free] <= mu_max + VERTEX_TOL:
                if not any(np.allclose(q, v, atol=VERTEX_TOL) for v in found):
                    found.append(q)
    if not found:
        raise ConstraintError(f"no normalized distribution in the box [{mu_min}, {mu_max}]")
    return np.array(found)


@dataclass
class LocalOptimum:
    """Best deterministic strategy and input distribution for the MDL functional."""

    value: float
    strategy: DeterministicStrategy
    inputs: NDArray[np.float64]


def lhv_optimum(params: MdlParams) -> LocalOptimum:
    """
    Maximize S_mu over every deterministic local strategy and every box vertex.

    The objective is linear in the input distribution, so vertices suffice.
    """
    vertices = box_vertices(params.mu_min, params.mu_max)
    win = winning_table(params)
    best: LocalOptimum | None = None
    for strategy in deterministic_strategies():
        table = Behavior.deterministic(*strategy).p
        per_input = np.sum(win * table, axis=(0, 1)).ravel()
        values = vertices @ per_input
        k = int(np.argmax(values))
        if best is None or values[k] > best.value:
            best = LocalOptimum(float(values[k]), strategy, vertices[k].reshape(2, 2))
    assert best is not None
    logger.debug(f"LHV optimum {best.value:.6g} at strategy {best.strategy}")
    return best


def lhv_max_s_mu(params: MdlParams) -> float:
    """Largest MDL value any local deterministic box reaches inside the mu box."""
    return lhv_optimum(params).value


def lhv_max(coeffs: BellCoefficients) -> float:
    """Local bound of a functional with fixed input weighting (e.g. 2 for CHSH)."""
    return max(coeffs.evaluate(Behavior.deterministic(*s)) for s in deterministic_strategies())
