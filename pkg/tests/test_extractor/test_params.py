# ABOUTME: Tests for extractor entropy requirements, Markov lifts and the key-length solver.
# ABOUTME: Uses hand-computed values and a closed-form oracle for output_length.

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import ArgumentError
from src.extractor.params import (
    ExtractorParams,
    LiftedParams,
    classical_log_inv_error,
    classical_requirement,
    markov_lift,
    output_length,
    smooth_requirement,
    working_lengths,
)
from src.sources.params import MdlParams

UNIFORM = MdlParams.uniform()


def closed_form_length(n: int, eta: float, d: int, mu_max: float, eps_ext: float) -> int:
    """
    Solve the budgets by hand.

    With L = log2(1/eps_ext), the classical error carries 2L + log2 3 + m - 2 bits and
    each source pays that plus L + 1. Both budgets stay below N = 2n, so the sum rule
    reduces to n eta + (d'/2) log2(1/mu_max) - 2n >= 6m + 10L + 4 log2 3 - 6 with
    d' = min(d, 2n).
    """
    log_inv = -math.log2(eps_ext)
    seed_bits = min(d, 2 * n) / 2 * -math.log2(mu_max)
    slack = n * eta + seed_bits - 2 * n - 10 * log_inv - 4 * math.log2(3) + 6
    return max(0, min(math.floor(slack / 6), 2 * n))


class TestClassicalRequirement:
    """Tests for classical_requirement."""

    def test_hand_value(self):
        """N = 8, m = 1, eps = 1/4 needs 7 bits per source."""
        req = classical_requirement(8, 1, 0.25)
        assert req.k1 == pytest.approx(7.0)
        assert req.k2 == pytest.approx(7.0)
        assert req.total == pytest.approx(14.0)
        assert req.feasible

    def test_infeasible_when_above_length(self):
        """Requirements above N are flagged infeasible."""
        assert not classical_requirement(8, 4, 0.01).feasible

    def test_random_reevaluation(self):
        """k1 + k2 = N + 2m + 2 log2(1/eps)."""
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(1, 10**6))
            m = int(rng.integers(1, n + 1))
            eps = float(10 ** rng.uniform(-30, 0))
            req = classical_requirement(n, m, eps)
            assert req.total == pytest.approx(n + 2 * m + 2 * math.log2(1 / eps))
            assert req.k1 + req.k2 == pytest.approx(req.total)

    def test_rejects_bad_arguments(self):
        """N, m and eps are validated."""
        with pytest.raises(ArgumentError):
            classical_requirement(0, 1, 0.1)
        with pytest.raises(ArgumentError):
            classical_requirement(8, 1, 0.0)


class TestMarkovLift:
    """Tests for markov_lift and smooth_requirement."""

    def test_lifted_error(self):
        """eps = 2^-42 at m = 2 lifts to sqrt(3) 2^-21."""
        p = ExtractorParams(n1=64, d=64, m=2, k1=10, k2=12, eps_ext=2.0**-42)
        lifted = markov_lift(p)
        assert lifted.eps == pytest.approx(math.sqrt(3) * 2.0**-21)
        assert lifted.log_inv_eps == pytest.approx(21 - math.log2(3) / 2)

    def test_lifted_thresholds(self):
        """Thresholds grow by log2(1/eps)."""
        p = ExtractorParams(n1=64, d=64, m=2, k1=10, k2=12, eps_ext=2.0**-40)
        lifted = markov_lift(p)
        assert lifted.k1 == pytest.approx(50.0)
        assert lifted.k2 == pytest.approx(52.0)
        assert lifted.m == 2

    def test_infeasible_lift(self):
        """A large output length pushes the lifted error to 1 or more."""
        p = ExtractorParams(n1=64, d=64, m=40, k1=10, k2=10, eps_ext=1e-6)
        lifted = markov_lift(p)
        assert not lifted.feasible
        assert lifted.eps > 1.0

    def test_hopeless_lift_reports_infinite_error(self):
        """Errors beyond float range read as infinity instead of overflowing."""
        p = ExtractorParams(n1=4096, d=4096, m=4000, k1=1, k2=1, eps_ext=0.5)
        lifted = markov_lift(p)
        assert lifted.log_inv_eps < -1000
        assert lifted.eps == math.inf

    def test_smooth_requirement_values(self):
        """eps = 2^-20 and k1 = 100 need 121 bits; final error 6 (eps_s + eps)."""
        req = smooth_requirement(LiftedParams(k1=100, k2=90, eps=2.0**-20, m=3), eps_s=1e-8)
        assert req.k1_req == pytest.approx(121.0)
        assert req.k2_req == pytest.approx(111.0)
        final = smooth_requirement(LiftedParams(k1=1, k2=1, eps=1e-8, m=1), eps_s=1e-8).final_error
        assert final == pytest.approx(1.2e-7)

    def test_random_reevaluation(self):
        """Lift and smoothing formulas on random inputs."""
        rng = np.random.default_rng(1)
        for _ in range(100):
            m = int(rng.integers(1, 20))
            eps = float(10 ** rng.uniform(-40, -10))
            p = ExtractorParams(n1=1000, d=1000, m=m, k1=float(rng.uniform(0, 1000)), k2=float(rng.uniform(0, 1000)), eps_ext=eps)
            lifted = markov_lift(p)
            assert lifted.eps == pytest.approx(math.sqrt(3 * eps * 2 ** (m - 2)))
            assert lifted.k1 == pytest.approx(p.k1 + math.log2(1 / eps))
            eps_s = float(10 ** rng.uniform(-12, -3))
            req = smooth_requirement(lifted, eps_s)
            assert req.k1_req == pytest.approx(lifted.k1 + math.log2(1 / lifted.eps) + 1)
            assert req.final_error == pytest.approx(6 * (eps_s + lifted.eps))

    def test_classical_error_inverts_lift(self):
        """The classical error from classical_log_inv_error lifts back to the target."""
        p = ExtractorParams(n1=10, d=10, m=7, k1=1, k2=1, log_inv_eps=classical_log_inv_error(1e-8, 7))
        assert markov_lift(p).eps == pytest.approx(1e-8)

    def test_classical_error_below_float_range(self):
        """At m = 3000 the classical error underflows but its logarithm still lifts exactly."""
        log_inv = classical_log_inv_error(1e-8, 3000)
        assert log_inv == pytest.approx(2 * math.log2(1e8) + math.log2(3) + 2998)
        p = ExtractorParams(n1=4000, d=4000, m=3000, k1=1, k2=1, log_inv_eps=log_inv)
        assert p.eps_ext == 0.0
        assert markov_lift(p).log_inv_eps == pytest.approx(math.log2(1e8))

    def test_params_validation(self):
        """Entropies cannot exceed input lengths and eps_ext lies in (0, 1)."""
        with pytest.raises(ValidationError):
            ExtractorParams(n1=4, d=4, m=1, k1=5, k2=1, eps_ext=0.1)
        with pytest.raises(ValidationError):
            ExtractorParams(n1=4, d=4, m=1, k1=1, k2=5, eps_ext=0.1)
        with pytest.raises(ValidationError):
            ExtractorParams(n1=4, d=4, m=1, k1=1, k2=1, eps_ext=1.0)
        assert ExtractorParams(n1=4, d=4, m=1, k1=1, k2=1, eps_ext=0.25).log_inv_eps == pytest.approx(2.0)


class TestWorkingLengths:
    """Tests for working_lengths."""

    def test_seed_is_cut_or_padded_to_two_n(self):
        """N is always 2n; only the first 2n seed bits are used."""
        assert working_lengths(100, 200) == (200, 200)
        assert working_lengths(100, 600) == (200, 200)
        assert working_lengths(100, 50) == (200, 50)


class TestOutputLength:
    """Tests for output_length."""

    def test_non_positive_rate_gives_no_key(self):
        """eta <= 0 extracts nothing."""
        assert output_length(1000, 0.0, 2000, UNIFORM, 1e-8, 1e-8) == 0
        assert output_length(1000, -0.1, 2000, UNIFORM, 1e-8, 1e-8) == 0

    @pytest.mark.parametrize(
        "n,eta,d,mu_max,eps_ext,expected",
        [
            (100, 0.9, 200, 0.25, 0.1, 9),
            (100, 0.95, 200, 0.25, 0.01, 4),
            (60, 1.0, 120, 0.25, 0.2, 6),
            (50, 0.8, 40, 0.25, 0.1, 0),
            (100, 0.3, 200, 0.25, 0.1, 0),
            (500, 0.95, 1000, 0.3, 0.01, 46),
            (500, 0.95, 2000, 0.3, 0.01, 46),
            (500, 0.9, 1000, 0.25, 0.01, 63),
            (10_000, 0.9, 20_000, 0.25, 1e-8, 1455),
        ],
    )
    def test_matches_closed_form(self, n, eta, d, mu_max, eps_ext, expected):
        """Binary search equals the hand-solved budget inequality."""
        params = MdlParams(mu_min=0.2 if mu_max > 0.25 else 0.25, mu_max=mu_max)
        assert closed_form_length(n, eta, d, mu_max, eps_ext) == expected
        assert output_length(n, eta, d, params, eps_ext, 1e-8) == expected

    def test_long_inputs_do_not_overflow(self):
        """N = 4000 bisects through m near 2000, where 2^(m - 2) is beyond float range."""
        assert output_length(2000, 0.9, 4000, UNIFORM, 1e-8, 1e-7) == 255

    def test_split_leans_on_the_seed(self):
        """The symmetric split asks the device for more than n eta, yet the seed covers the rest."""
        log_inv = classical_log_inv_error(1e-8, 255)
        symmetric = classical_requirement(4000, 255, 2.0**-log_inv)
        assert symmetric.k1 > 2000 * 0.9
        assert output_length(2000, 0.9, 4000, UNIFORM, 1e-8, 1e-7) == 255

    def test_linear_growth_with_huge_budgets(self):
        """eta = 1, uniform seed, d = 2n and errors 2^-64: m grows linearly in n."""
        eps = 2.0**-64
        for n, expected in [(10**4, 1559), (10**5, 16559), (10**6, 166559)]:
            m = output_length(n, 1.0, 2 * n, UNIFORM, eps, eps)
            assert m == expected == closed_form_length(n, 1.0, 2 * n, 0.25, eps)
            assert m >= 0.15 * n

    def test_nonzero_for_good_budgets(self):
        """Near-full budgets at the uniform box give a key."""
        assert output_length(100, 0.9, 200, UNIFORM, 0.1, 1e-8) > 0

    def test_monotone_in_eta(self):
        """More device entropy never shortens the key."""
        lengths = [output_length(1000, eta, 2000, UNIFORM, 1e-6, 1e-8) for eta in np.linspace(0.1, 1.0, 19)]
        assert all(b >= a for a, b in zip(lengths, lengths[1:]))
        assert lengths[-1] > 0

    def test_monotone_in_seed_length(self):
        """A longer seed never shortens the key; bits beyond 2n add nothing."""
        params = MdlParams(mu_min=0.2, mu_max=0.3)
        lengths = [output_length(500, 0.95, d, params, 0.01, 1e-8) for d in range(200, 2401, 200)]
        assert all(b >= a for a, b in zip(lengths, lengths[1:]))
        assert lengths[4:] == [46] * 8

    def test_monotone_in_rounds_when_seed_covers_two_n(self):
        """With d >= 2n, more rounds never shorten the key."""
        for d_of in (lambda n: 2 * n, lambda n: 4000):
            lengths = [output_length(n, 0.9, d_of(n), UNIFORM, 0.01, 1e-8) for n in (500, 600, 800, 1000, 2000)]
            assert all(b >= a for a, b in zip(lengths, lengths[1:]))
            assert lengths[0] == 63

    def test_short_fixed_seed_is_diluted_by_rounds(self):
        """A seed fixed below 2n is padded to N, so extra rounds cost sum-rule slack."""
        assert output_length(500, 0.9, 1000, UNIFORM, 0.01, 1e-8) == 63
        assert output_length(600, 0.9, 1000, UNIFORM, 0.01, 1e-8) == 45
        assert closed_form_length(600, 0.9, 1000, 0.25, 0.01) == 45

    def test_weak_seed_gives_no_key(self):
        """A seed source far from uniform cannot meet the sum rule."""
        params = MdlParams(mu_min=0.1, mu_max=0.6)
        assert output_length(100, 0.9, 200, params, 0.1, 1e-8) == 0

    def test_rejects_bad_arguments(self):
        """n, d and eps_ext are validated."""
        with pytest.raises(ArgumentError):
            output_length(0, 0.5, 10, UNIFORM, 0.1, 1e-8)
        with pytest.raises(ArgumentError):
            output_length(10, 0.5, 11, UNIFORM, 0.1, 1e-8)
        with pytest.raises(ArgumentError):
            output_length(10, 0.5, 10, UNIFORM, 1.0, 1e-8)
