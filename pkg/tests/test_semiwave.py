"""Speed-constant solvers: closed-form anchors, identities, monotonicity."""

import math

import numpy as np
import pytest

from fbcomp.errors import BracketFailure, InvalidSpec
from fbcomp.model import ModelParams
from fbcomp.semiwave import (CoupledSemiWaveSpec, ScalarSemiWaveSpec,
                             compute_R_star, compute_c_star, compute_s_star,
                             estimate_c0, solve_coupled_semiwave,
                             solve_scalar_semiwave)

WEAK_STRONG = ModelParams(d=1.0, r=1.0, h=2.0, k=0.5, mu1=1.0, mu2=2.0)


class TestCriticalRadius:
    def test_one_dimensional(self):
        assert compute_R_star(1) == pytest.approx(math.pi / 2, abs=1e-10)

    def test_three_dimensional(self):
        assert compute_R_star(3) == pytest.approx(math.pi, abs=1e-10)

    def test_two_dimensional_bessel_zero(self):
        assert compute_R_star(2) == pytest.approx(2.404825557695773, abs=1e-8)

    def test_invalid_dimension(self):
        with pytest.raises(InvalidSpec):
            compute_R_star(0)


class TestScalarSemiWave:
    def test_zero_speed_first_integral(self):
        # at s=0 the first integral gives |q'(0)| = a^{3/2}/(sqrt(3d) b)
        sol = solve_scalar_semiwave(ScalarSemiWaveSpec(a=1, b=1, d=1, s=0,
                                                       L=40, n=4000))
        assert abs(sol.dq0) == pytest.approx(1 / math.sqrt(3), rel=1e-4)

    def test_boundary_clamp(self):
        sol = solve_scalar_semiwave(ScalarSemiWaveSpec(a=4, b=2, d=1, s=0,
                                                       L=40, n=4000))
        assert sol.q[0] == pytest.approx(2.0, abs=1e-8)
        assert sol.q[-1] == 0.0

    def test_near_maximal_speed_still_solvable(self):
        sol = solve_scalar_semiwave(ScalarSemiWaveSpec.default(1, 1, 1, 1.95))
        assert sol.dq0 < 0
        assert sol.converged

    def test_profile_positive_and_decreasing(self):
        sol = solve_scalar_semiwave(ScalarSemiWaveSpec.default(1, 1, 1, 0.5))
        assert np.all(sol.q[:-1] > 0)
        assert np.all(np.diff(sol.q) <= 0)

    def test_speed_at_or_above_maximum_rejected(self):
        with pytest.raises(InvalidSpec):
            ScalarSemiWaveSpec(a=1, b=1, d=1, s=2.0, L=40, n=4000).validate()


class TestScalarSpeed:
    def test_frozen_value(self):
        assert compute_s_star(1, 1, 1, 2) == pytest.approx(
            0.5476947682103857, abs=1e-6)

    def test_small_mu_asymptote(self):
        # s* ~ mu * a^{3/2} / (sqrt(3d) b) for small mu
        assert compute_s_star(1, 1, 1, 0.01) == pytest.approx(
            0.01 / math.sqrt(3), rel=0.05)

    def test_monotone_in_mu(self):
        assert compute_s_star(1, 1, 1, 10) > compute_s_star(1, 1, 1, 1)

    def test_scaling_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(3):
            a, b, d, mu = np.exp(rng.uniform(np.log(0.3), np.log(4.0), 4))
            lhs = compute_s_star(a, b, d, mu)
            rhs = math.sqrt(a * d) * compute_s_star(1, 1, 1, mu * a / (b * d))
            assert lhs == pytest.approx(rhs, abs=1e-6 * rhs)

    def test_bounds(self):
        s = compute_s_star(3, 2, 0.7, 5)
        assert 0 < s < 2 * math.sqrt(3 * 0.7)

    def test_truncation_robustness(self):
        base = compute_s_star(1, 1, 1, 2)
        fine = compute_s_star(1, 1, 1, 2, L=80.0, n=8000)
        assert abs(base - fine) < 1e-6

    def test_short_truncation_breaks_bracket(self):
        with pytest.raises(BracketFailure):
            compute_s_star(1, 1, 1, 2, L=0.2, n=20)


class TestCoupledSemiWave:
    def test_decoupled_matches_scalar(self):
        c = 0.3
        coupled = solve_coupled_semiwave(
            CoupledSemiWaveSpec.default(1.0, 1.0, 2.0, 0.0, c))
        scalar = solve_scalar_semiwave(ScalarSemiWaveSpec.default(1, 1, 1, c))
        nl = 4000
        assert np.max(np.abs(coupled.U[: nl + 1] - scalar.q)) < 1e-8

    def test_zero_speed_profiles(self):
        sol = solve_coupled_semiwave(
            CoupledSemiWaveSpec.default(1.0, 1.0, 2.0, 0.5, 0.0))
        assert sol.U[0] == pytest.approx(1.0, abs=1e-3)
        assert sol.V[-1] == 1.0
        nl = 4000
        assert np.all(np.diff(sol.U[: nl + 1]) <= 0)
        assert np.all(np.diff(sol.V) >= -1e-12)

    def test_degenerate_at_maximal_speed(self):
        sol = solve_coupled_semiwave(
            CoupledSemiWaveSpec.default(1.0, 1.0, 2.0, 0.5, 2.0))
        assert sol.degenerate

    def test_mismatched_grid_spacing_rejected(self):
        with pytest.raises(InvalidSpec):
            CoupledSemiWaveSpec(d=1, r=1, h=2, k=0.5, c=0.1, L_left=40,
                                L_right=40, n_left=4000,
                                n_right=3999).validate()


class TestCoupledSpeed:
    def test_frozen_value(self):
        assert compute_c_star(WEAK_STRONG) == pytest.approx(
            0.28529675649060504, abs=1e-6)

    def test_decoupling_identity(self):
        p = ModelParams(d=1.0, r=1.0, h=2.0, k=1e-30, mu1=1.0, mu2=1.0)
        assert compute_c_star(p) == pytest.approx(
            compute_s_star(1, 1, 1, 1), abs=1e-6)

    def test_monotone_in_mu1(self):
        lo = compute_c_star(ModelParams(1, 1, 2, 0.5, 0.5, 1))
        hi = compute_c_star(ModelParams(1, 1, 2, 0.5, 2.0, 1))
        assert hi > lo

    def test_bounds(self):
        c = compute_c_star(WEAK_STRONG)
        assert 0 < c < 2 * math.sqrt(1.0)

    def test_requires_weak_strong(self):
        with pytest.raises(InvalidSpec):
            compute_c_star(ModelParams(1, 1, 0.5, 2.0, 1, 1))


class TestMinimalSpeedBracket:
    def test_bracket_properties(self):
        lo, hi = estimate_c0(WEAK_STRONG)
        assert hi - lo <= 1e-3
        assert lo >= 2 * math.sqrt(1 * 1 * (1 - 0.5)) - 1e-3
        assert hi <= 2 * math.sqrt(1 * 1) + 1e-3
        assert compute_c_star(WEAK_STRONG) < hi

    def test_small_k_bracket_near_kpp_speed(self):
        # truncation-induced detection bias near the maximal speed is O(1/L),
        # so this qualitative limit is checked at the percent level
        p = ModelParams(d=1.0, r=1.0, h=2.0, k=0.01, mu1=1.0, mu2=1.0)
        lo, hi = estimate_c0(p)
        assert hi >= 2 * math.sqrt(1 * 1) * 0.99
