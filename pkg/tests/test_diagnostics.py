"""Trajectory diagnostics: speed fits, segregation metrics, outcome labels."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbcomp.diagnostics import (check_region_B, classify_outcome,
                                fit_front_speed, segregation_metrics,
                                speed_report, trichotomy_thresholds)
from fbcomp.errors import EmptyBand, WindowTooShort
from fbcomp.model import ModelParams, NumericsConfig, SimState
from fbcomp.simulate import Trajectory

PARAMS = ModelParams(d=1.0, r=1.0, h=2.0, k=0.5, mu1=1.0, mu2=2.0)


class TestFitFrontSpeed:
    def test_affine_series_exact(self):
        t = np.linspace(0.0, 10.0, 201)
        rep = fit_front_speed(t, 3.0 + 0.42 * t)
        assert rep.slope == pytest.approx(0.42, abs=1e-12)
        assert rep.max_residual < 1e-12
        assert rep.t_lo >= 5.0 - 1e-12

    @settings(max_examples=30, deadline=None)
    @given(slope=st.floats(-5.0, 5.0), intercept=st.floats(-10.0, 10.0))
    def test_affine_series_exact_property(self, slope, intercept):
        t = np.linspace(0.0, 10.0, 101)
        rep = fit_front_speed(t, intercept + slope * t)
        assert rep.slope == pytest.approx(slope, abs=1e-9)

    def test_constant_series_zero_slope(self):
        t = np.linspace(0.0, 10.0, 201)
        rep = fit_front_speed(t, np.full_like(t, 2.5))
        assert rep.slope == pytest.approx(0.0, abs=1e-14)

    def test_log_drift_converges_to_slope(self):
        # s(t) = c t + log(1+t): fitted slope approaches c as the horizon grows
        c = 0.3
        errs = []
        for T in (50.0, 200.0, 800.0):
            t = np.linspace(0.0, T, 2001)
            rep = fit_front_speed(t, c * t + np.log1p(t))
            errs.append(abs(rep.slope - c))
        assert errs[2] < errs[1] < errs[0]
        assert errs[2] < 5e-3

    def test_window_too_short(self):
        t = np.linspace(0.0, 1.0, 12)
        with pytest.raises(WindowTooShort):
            fit_front_speed(t, t)

    def test_bad_window_fraction(self):
        t = np.linspace(0.0, 10.0, 201)
        with pytest.raises(WindowTooShort):
            fit_front_speed(t, t, window_fraction=0.9)

    def test_speed_report_rel_err(self):
        t = np.linspace(0.0, 10.0, 201)
        rep = speed_report(t, 1.0 + 0.5 * t, predicted=0.4)
        assert rep.predicted == 0.4
        assert rep.rel_err == pytest.approx(0.25, abs=1e-10)


def segregated_snapshot(t=40.0, c_hat=0.3, s_hat=0.55, n=4000):
    # idealized sharp pattern: u = 1 on [0, c t), v = 1 on (c t, s t)
    s1 = c_hat * t
    s2 = s_hat * t
    R = np.linspace(0.0, 1.0, n + 1)
    U = np.where(R < 1.0 - 1e-9, 1.0, 0.0)
    rv = R * s2
    V = np.where((rv > s1) & (rv < s2), 1.0, 0.0)
    V[0] = 0.0
    V[-1] = 0.0
    return SimState(t=t, s1=s1, s2=s2, s1_dot=c_hat, s2_dot=s_hat, U=U, V=V)


class TestSegregationMetrics:
    def test_idealized_pattern_near_zero(self):
        snap = segregated_snapshot()
        m = segregation_metrics(snap, 0.3, 0.55, eps=0.1)
        assert m.sup_u_dev_inner < 0.05
        assert m.sup_v_dev_shell < 0.05
        assert m.sup_v_inner < 0.05

    def test_eps_monotone(self):
        # shrinking the bands can only decrease each sup
        snap = segregated_snapshot()
        a = segregation_metrics(snap, 0.3, 0.55, eps=0.05)
        b = segregation_metrics(snap, 0.3, 0.55, eps=0.2)
        assert b.sup_u_dev_inner <= a.sup_u_dev_inner + 1e-15
        assert b.sup_v_dev_shell <= a.sup_v_dev_shell + 1e-15
        assert b.sup_v_inner <= a.sup_v_inner + 1e-15

    def test_empty_shell_band(self):
        snap = segregated_snapshot(c_hat=0.5, s_hat=0.55)
        with pytest.raises(EmptyBand):
            segregation_metrics(snap, 0.5, 0.55, eps=0.2)

    def test_empty_inner_band_at_t_zero(self):
        snap = segregated_snapshot(t=0.0)
        with pytest.raises(EmptyBand):
            segregation_metrics(snap, 0.3, 0.55)


def fake_trajectory(s1_series, s2_series, U, V, t_end=10.0):
    n = len(s1_series) - 1
    times = np.linspace(0.0, t_end, n + 1)
    final = SimState(t=t_end, s1=s1_series[-1], s2=s2_series[-1],
                     s1_dot=0.0, s2_dot=0.0, U=U, V=V)
    return Trajectory(mode="P", params=PARAMS, numerics=NumericsConfig(),
                      times=times, s1=np.asarray(s1_series, float),
                      s2=np.asarray(s2_series, float),
                      s1_dot=np.zeros(n + 1), s2_dot=np.zeros(n + 1),
                      snapshots=[final])


class TestClassifyOutcome:
    def test_vanish_and_spread(self):
        m = 200
        t = np.linspace(0.0, 10.0, m + 1)
        s1 = np.full(m + 1, 2.0)            # stalled front
        s2 = 3.0 + 1.2 * t                   # expanding front
        U = np.full(65, 1e-5)
        U[-1] = 0.0
        V = np.ones(65)
        V[-1] = 0.0
        out = classify_outcome(fake_trajectory(s1, s2, U, V))
        assert out["u"].status == "vanishes"
        assert out["v"].status == "spreads"
        assert out["v"].plateau_length > 1.0

    def test_undecided(self):
        m = 200
        t = np.linspace(0.0, 10.0, m + 1)
        s1 = 2.0 + 0.1 * t                   # slow growth, sup still large
        U = 0.5 * np.ones(65)
        U[-1] = 0.0
        out = classify_outcome(fake_trajectory(s1, np.full(m + 1, 3.0), U,
                                               np.zeros(65)))
        assert out["u"].status == "undecided"


class TestThresholds:
    def test_values_for_unit_coefficients(self):
        th = trichotomy_thresholds(PARAMS)
        R = math.pi / 2
        assert th.s_star_low == pytest.approx(R, abs=1e-10)
        assert th.s_star_mid == pytest.approx(R * math.sqrt(2.0), abs=1e-10)
        assert th.s_star_v == pytest.approx(R, abs=1e-10)

    @pytest.mark.parametrize("k", [0.1, 0.3, 0.5, 0.9])
    def test_ordering_in_k(self, k):
        p = ModelParams(d=1.0, r=1.0, h=2.0, k=k, mu1=1.0, mu2=2.0)
        th = trichotomy_thresholds(p)
        assert th.s_star_low < th.s_star_mid


class TestRegionB:
    def test_fast_invader_positive_margin(self):
        rep = check_region_B(ModelParams(1, 1, 2, 0.5, 1.0, 0.05))
        assert rep.positive
        assert rep.margin == pytest.approx(rep.c_star - rep.s_star)

    def test_slow_invader_negative_margin(self):
        rep = check_region_B(ModelParams(1, 1, 2, 0.5, 0.05, 2.0))
        assert not rep.positive
