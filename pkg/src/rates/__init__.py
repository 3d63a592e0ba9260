# ABOUTME: Entropy arithmetic: single-round bounds, min-tradeoff functions and finite-size rates.
# ABOUTME: Also the completeness bound and maximal-entropy curves.

from src.rates.eat import (
    EatParams,
    RateResult,
    asymptotic_rate,
    completeness_bound,
    eta_opt,
    hoeffding_delta,
    optimize_cut,
    rate_curve,
)
from src.rates.entropy import (
    alpha_from_smu,
    binary_entropy,
    critical_violation,
    g_mu,
    single_round_bound,
)
from src.rates.maximal import MaxEntropyPoint, family_mu_max, max_entropy_bound, max_entropy_curve
from src.rates.tradeoff import FrequencyDist, f_min, linearize, s_mu_of_freq, slope, zeta

__all__ = [
    "EatParams",
    "FrequencyDist",
    "MaxEntropyPoint",
    "RateResult",
    "alpha_from_smu",
    "asymptotic_rate",
    "binary_entropy",
    "completeness_bound",
    "critical_violation",
    "eta_opt",
    "f_min",
    "family_mu_max",
    "g_mu",
    "hoeffding_delta",
    "linearize",
    "max_entropy_bound",
    "max_entropy_curve",
    "optimize_cut",
    "rate_curve",
    "s_mu_of_freq",
    "single_round_bound",
    "slope",
    "zeta",
]
