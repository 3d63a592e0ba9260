# ABOUTME: Two-qubit quantum layer: states, measurements, behaviors and Bell functionals.
# ABOUTME: Includes the local-hidden-variable oracle and the Bell-operator optimizer.

from src.quantum.behavior import Behavior, behavior_from_projectors, born_behavior
from src.quantum.functionals import (
    BellCoefficients,
    chsh_beta,
    chsh_coefficients,
    eberhard_alpha,
    eberhard_coefficients,
    s_mu,
    s_mu_coefficients,
    s_mu_tilde,
    s_tilde_coefficients,
    winning_table,
    winning_value,
)
from src.quantum.lhv import box_vertices, deterministic_strategies, lhv_max, lhv_max_s_mu, lhv_optimum
from src.quantum.measurement import Measurement, QuantumStrategy, optimal_chsh_strategy
from src.quantum.operators import (
    DensityOperator,
    depolarize,
    maximally_mixed,
    phi_plus,
    pure_state,
    trace_distance,
)
from src.quantum.optimizer import (
    OptimizationResult,
    OptimizerConfig,
    bell_operator,
    bloch_spot_check,
    optimize_bell,
    optimize_s_tilde,
)

__all__ = [
    "Behavior",
    "BellCoefficients",
    "DensityOperator",
    "Measurement",
    "OptimizationResult",
    "OptimizerConfig",
    "QuantumStrategy",
    "behavior_from_projectors",
    "bell_operator",
    "bloch_spot_check",
    "born_behavior",
    "box_vertices",
    "chsh_beta",
    "chsh_coefficients",
    "depolarize",
    "deterministic_strategies",
    "eberhard_alpha",
    "eberhard_coefficients",
    "lhv_max",
    "lhv_max_s_mu",
    "lhv_optimum",
    "maximally_mixed",
    "optimal_chsh_strategy",
    "optimize_bell",
    "optimize_s_tilde",
    "phi_plus",
    "pure_state",
    "s_mu",
    "s_mu_coefficients",
    "s_mu_tilde",
    "s_tilde_coefficients",
    "trace_distance",
    "winning_table",
    "winning_value",
]
