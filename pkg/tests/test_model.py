"""Value-type invariants: parameters, initial data, numerics, state."""

import numpy as np
import pytest

from fbcomp.errors import InvalidSpec, InvalidState
from fbcomp.model import InitialData, ModelParams, NumericsConfig, SimState


def bump(front, amp, n=64):
    R = np.linspace(0.0, 1.0, n + 1)
    prof = amp * np.cos(0.5 * np.pi * R) ** 2
    prof[-1] = 0.0
    return prof


class TestModelParams:
    def test_valid(self):
        p = ModelParams(d=1, r=1, h=2, k=0.5, mu1=1, mu2=2).validate()
        assert p.weak_strong

    def test_symmetric_case_not_weak_strong(self):
        p = ModelParams(d=1, r=1, h=0.5, k=2.0, mu1=1, mu2=2).validate()
        assert not p.weak_strong
        with pytest.raises(InvalidSpec):
            p.require_weak_strong()

    @pytest.mark.parametrize("field", ["d", "r", "h", "k", "mu1", "mu2"])
    def test_positive_required(self, field):
        kw = dict(d=1, r=1, h=2, k=0.5, mu1=1, mu2=2)
        kw[field] = 0.0
        with pytest.raises(InvalidSpec):
            ModelParams(**kw).validate()

    def test_dimension_must_be_positive_integer(self):
        with pytest.raises(InvalidSpec):
            ModelParams(1, 1, 2, 0.5, 1, 2, N=0).validate()


class TestInitialData:
    def test_valid_pair(self):
        InitialData(s1_0=2.0, u0=bump(2, 0.8),
                    s2_0=3.0, v0=bump(3, 0.5)).validate()

    def test_single_species_side_optional(self):
        InitialData(s1_0=2.0, u0=bump(2, 0.8)).validate()

    def test_front_and_profile_must_pair(self):
        with pytest.raises(InvalidSpec):
            InitialData(s1_0=2.0, u0=bump(2, 0.8), s2_0=3.0).validate()

    def test_profile_must_vanish_at_front(self):
        prof = bump(2, 0.8)
        prof[-1] = 0.1
        with pytest.raises(InvalidSpec):
            InitialData(s1_0=2.0, u0=prof).validate()

    def test_profile_positive_inside(self):
        prof = bump(2, 0.8)
        prof[10] = 0.0
        with pytest.raises(InvalidSpec):
            InitialData(s1_0=2.0, u0=prof).validate()

    def test_negative_values_rejected(self):
        prof = bump(2, 0.8)
        prof[10] = -0.1
        with pytest.raises(InvalidSpec):
            InitialData(s1_0=2.0, u0=prof).validate()

    def test_symmetry_at_origin_required(self):
        n = 64
        R = np.linspace(0.0, 1.0, n + 1)
        prof = 0.8 * (1.0 - R)  # nonzero slope at the origin
        prof[-1] = 0.0
        with pytest.raises(InvalidSpec):
            InitialData(s1_0=2.0, u0=prof).validate()

    def test_identically_zero_species_allowed(self):
        InitialData(s1_0=2.0, u0=bump(2, 0.8),
                    s2_0=3.0, v0=np.zeros(65)).validate()


class TestNumericsConfig:
    def test_defaults_valid(self):
        NumericsConfig().validate()

    def test_unknown_scheme(self):
        with pytest.raises(InvalidSpec):
            NumericsConfig(scheme="spectral").validate()

    def test_coarse_grid_rejected(self):
        with pytest.raises(InvalidSpec):
            NumericsConfig(n_cells=8).validate()

    def test_with_returns_modified_copy(self):
        base = NumericsConfig()
        other = base.with_(dt=1e-4)
        assert other.dt == 1e-4
        assert base.dt == 1e-3


class TestSimState:
    def test_valid(self):
        SimState(t=0.0, s1=1.0, s2=2.0, s1_dot=0.1, s2_dot=0.2,
                 U=np.zeros(9), V=np.zeros(9)).validate()

    def test_negative_density_rejected(self):
        with pytest.raises(InvalidState):
            SimState(t=0.0, s1=1.0, s2=2.0, s1_dot=0.0, s2_dot=0.0,
                     U=np.full(9, -0.5), V=np.zeros(9)).validate()

    def test_nonpositive_front_rejected(self):
        with pytest.raises(InvalidState):
            SimState(t=0.0, s1=0.0, s2=2.0, s1_dot=0.0, s2_dot=0.0,
                     U=np.zeros(9), V=np.zeros(9)).validate()
