"""Initial-data builders, regime validation, and named presets.

Builders produce InitialData satisfying the admissibility invariants
(symmetry at the origin, vanishing at the front) by construction, using
raised-cosine bumps and smoothstep plateaus.  Presets bundle parameters,
initial data, numerics, and expected qualitative outcomes so the CLI,
service, and acceptance suite all drive the same scenarios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .diagnostics import check_region_B, trichotomy_thresholds
from .errors import ConditionViolated, InvalidSpec, PresetUnreachable
from .model import InitialData, ModelParams, NumericsConfig

__all__ = [
    "ScenarioSpec",
    "RegimeReport",
    "build_corollary1_data",
    "build_Q_data",
    "build_trichotomy_preset",
    "validate_regime",
    "get_preset",
    "PRESET_NAMES",
]

REGIME_BOUNDARY_TOL = 1e-6
DEFAULT_PARAMS = ModelParams(d=1.0, r=1.0, h=2.0, k=0.5, mu1=1.0, mu2=2.0, N=1)

_TAGS = ("weak_strong_A2", "region_B_i", "region_B_ii", "region_B_iii",
         "single_species", "problem_Q")


@dataclass(frozen=True)
class ScenarioSpec:
    """A fully materialized scenario: who runs, with what data, for how long."""

    tag: str
    mode: str  # "P" or "Q"
    params: ModelParams
    init: InitialData
    numerics: NumericsConfig
    v_background: np.ndarray | None = None  # Q mode only
    L_domain: float | None = None           # Q mode only
    margin: float | None = None              # c* - s* when computed
    expected: dict = field(default_factory=dict)

    def validate(self) -> "ScenarioSpec":
        if self.tag not in _TAGS:
            raise InvalidSpec(f"unknown scenario tag {self.tag!r}")
        if self.mode not in ("P", "Q"):
            raise InvalidSpec("mode must be 'P' or 'Q'")
        self.params.validate()
        self.init.validate()
        self.numerics.validate()
        if self.mode == "Q" and (self.v_background is None or self.L_domain is None):
            raise InvalidSpec("Q mode needs v_background and L_domain")
        if self.tag != "single_species":
            self.params.require_weak_strong()
        if self.margin is not None:
            if self.tag == "weak_strong_A2" and not self.margin < 0:
                raise InvalidSpec("weak_strong_A2 requires c* < s*")
            if self.tag.startswith("region_B") and not self.margin > 0:
                raise InvalidSpec(f"{self.tag} requires c* > s*")
        return self


def _smoothstep(x):
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def _cos_bump(front: float, amplitude: float, n: int) -> np.ndarray:
    R = np.linspace(0.0, 1.0, n + 1)
    prof = amplitude * np.cos(0.5 * np.pi * R) ** 2
    prof[-1] = 0.0
    return prof


def build_corollary1_data(params: ModelParams, s1_0: float, x0: float,
                          L: float, amplitude: float = 0.8, pad: float = 4.0,
                          floor: float = 0.02, n: int = 2000) -> InitialData:
    """Initial data meeting the sufficient spreading conditions for u.

    u0 is a raised-cosine bump of the given amplitude (must be <= 1) on
    [0, s1_0], with s1_0 at or above the critical radius threshold
    R* sqrt(d/(r(1-k))).  v0 rises from a small positive floor to a plateau
    of height 1 on [x0, x0+L] and descends to 0 at s2_0 = x0 + L + pad.
    Deterministic: identical inputs give identical arrays.
    """
    params.validate()
    thr = trichotomy_thresholds(params).s_star_mid
    if s1_0 < thr:
        raise ConditionViolated(
            f"s1_0={s1_0:.6g} below the spreading threshold {thr:.6g}")
    if amplitude > 1.0:
        raise ConditionViolated("u0 amplitude must be <= 1")
    if not (amplitude > 0 and x0 > 0 and L > 0 and pad > 0):
        raise ConditionViolated("amplitude, x0, L, pad must be > 0")
    if not 0 < floor < 1:
        raise ConditionViolated("floor must lie in (0, 1)")
    ramp = min(pad, x0)  # rise width for the v plateau
    s2_0 = x0 + L + pad
    u0 = _cos_bump(s1_0, amplitude, n)
    r = np.linspace(0.0, s2_0, n + 1)
    up = _smoothstep((r - (x0 - ramp)) / ramp)
    down = _smoothstep((s2_0 - r) / pad)
    v0 = (floor + (1.0 - floor) * up) * down
    v0[-1] = 0.0
    return InitialData(s1_0=s1_0, u0=u0, s2_0=s2_0, v0=v0).validate()


def build_Q_data(params: ModelParams, h0: float, v_background_level: float,
                 amplitude: float = 0.8, n: int = 2000,
                 L_domain: float = 100.0):
    """Invader bump on [0, h0] plus a resident background profile.

    Returns (InitialData for u, v0 array on the uniform grid over
    [0, L_domain]).  The background is flat at v_background_level, so it is
    bounded and stays at the level outside every compact set.
    """
    params.validate()
    if not h0 > 0:
        raise ConditionViolated("h0 must be > 0")
    if not v_background_level > 0:
        raise ConditionViolated("v_background_level must be > 0")
    if not amplitude > 0:
        raise InvalidSpec("u0: profile must be positive inside [0, front)")
    init_u = InitialData(s1_0=h0, u0=_cos_bump(h0, amplitude, n)).validate()
    v0 = np.full(n + 1, float(v_background_level))
    return init_u, v0


@dataclass(frozen=True)
class RegimeReport:
    """Competition-regime classification with the computed speed constants."""

    weak_strong: bool
    c_star: float | None = None
    s_star: float | None = None
    margin: float | None = None
    regime: str = "out_of_scope"  # A2 | B | boundary | out_of_scope
    two_sqrt_rd: float | None = None
    s_star_dominates: bool | None = None  # sufficient condition 2*sqrt(rd) <= s*

    @property
    def A2_flag(self) -> bool:
        return self.regime == "A2"

    def to_dict(self) -> dict:
        return {
            "weak_strong": self.weak_strong, "c_star": self.c_star,
            "s_star": self.s_star, "margin": self.margin,
            "regime": self.regime, "two_sqrt_rd": self.two_sqrt_rd,
            "s_star_dominates": self.s_star_dominates,
            "A2_flag": self.A2_flag,
        }


def validate_regime(params: ModelParams,
                    boundary_tol: float = REGIME_BOUNDARY_TOL) -> RegimeReport:
    """Classify the parameter point: weak-strong flag and the A2/B split.

    The split compares c* (coupled semi-wave speed for u) against s* (scalar
    semi-wave speed for v); |c* - s*| below boundary_tol is reported as
    "boundary".  Also reports whether 2*sqrt(rd) <= s*, a sufficient
    condition for the two-speed regime independent of c*.
    """
    params.validate()
    if not params.weak_strong:
        return RegimeReport(weak_strong=False)
    rb = check_region_B(params)
    two = 2.0 * math.sqrt(params.r * params.d)
    if abs(rb.margin) < boundary_tol:
        regime = "boundary"
    else:
        regime = "B" if rb.margin > 0 else "A2"
    return RegimeReport(weak_strong=True, c_star=rb.c_star, s_star=rb.s_star,
                        margin=rb.margin, regime=regime, two_sqrt_rd=two,
                        s_star_dominates=two <= rb.s_star)


# calibrated trichotomy recipes: (s1 factor of its threshold, s2 factor of
# R*, u amp, v amp, mu1 cap, mu2 start, t_end, expected outcomes)
_TRICHOTOMY = {
    "i": (0.80, 0.80, 0.2, 0.2, 0.2, 0.05, 40.0,
          {"u": "vanishes", "v": "vanishes"}),
    "ii": (0.51, 1.20, 0.05, 0.5, 0.2, 0.10, 120.0,
           {"u": "vanishes", "v": "spreads"}),
    "iii": (1.04, 0.76, 0.8, 0.5, 1.0, 0.05, 60.0,
            {"u": "spreads", "v": "vanishes"}),
}


def build_trichotomy_preset(which: str, params_base: ModelParams = DEFAULT_PARAMS,
                            n_cells: int = 512, dt: float = 2e-3,
                            max_halvings: int = 20) -> ScenarioSpec:
    """One of the three vanishing/spreading scenarios, in the c* > s* region.

    (i) both initial radii below their thresholds with both front-response
    coefficients small; (ii) the resident radius raised above its threshold;
    (iii) the invader radius raised above its threshold with mu2 small.  mu2
    is halved until c* > s* holds (halving shrinks s* while leaving c*
    fixed); the loop raises PresetUnreachable if the bound is exhausted.
    """
    if which not in _TRICHOTOMY:
        raise InvalidSpec(f"which must be one of {sorted(_TRICHOTOMY)}")
    params_base.require_weak_strong()
    f1, f2, amp_u, amp_v, mu1_cap, mu2_start, t_end, expected = _TRICHOTOMY[which]
    thr = trichotomy_thresholds(params_base)
    s1_0 = f1 * (thr.s_star_low if which != "iii" else thr.s_star_mid)
    s2_0 = f2 * thr.s_star_v
    mu1 = min(params_base.mu1, mu1_cap)
    mu2 = min(params_base.mu2, mu2_start)
    params = margin = None
    for _ in range(max_halvings):
        cand = replace(params_base, mu1=mu1, mu2=mu2)
        m = check_region_B(cand).margin
        if m > 0:
            params, margin = cand, m
            break
        mu2 *= 0.5
    if params is None:
        raise PresetUnreachable(
            f"no mu2 in [{mu2:.3g}, {mu2_start:.3g}] gives c* > s*")
    init = InitialData(s1_0=s1_0, u0=_cos_bump(s1_0, amp_u, n_cells),
                       s2_0=s2_0, v0=_cos_bump(s2_0, amp_v, n_cells))
    numerics = NumericsConfig(n_cells=n_cells, dt=dt, t_end=t_end,
                              snapshot_every=max(1, int(round(t_end / dt / 10))))
    return ScenarioSpec(tag=f"region_B_{which}", mode="P", params=params,
                        init=init, numerics=numerics, margin=margin,
                        expected=dict(expected)).validate()


def _preset_weak_strong_A2() -> ScenarioSpec:
    params = DEFAULT_PARAMS
    rb = check_region_B(params)
    span = float(math.ceil(20.0 * max(1.0, 1.0 / rb.c_star)))
    init = build_corollary1_data(params, s1_0=3.0, x0=span, L=span)
    numerics = NumericsConfig(n_cells=2000, dt=1e-3, t_end=240.0,
                              snapshot_every=24000)
    return ScenarioSpec(tag="weak_strong_A2", mode="P", params=params,
                        init=init, numerics=numerics, margin=rb.margin,
                        expected={"u": "spreads", "v": "spreads",
                                  "u_speed": rb.c_star, "v_speed": rb.s_star},
                        ).validate()


def _preset_single_species() -> ScenarioSpec:
    """u alone (v identically zero): the coupled run degenerates to scalar."""
    params = replace(DEFAULT_PARAMS, mu1=2.0)
    n = 2000
    init = InitialData(s1_0=3.0, u0=_cos_bump(3.0, 0.8, n),
                       s2_0=3.0, v0=np.zeros(n + 1))
    numerics = NumericsConfig(n_cells=n, dt=1e-3, t_end=60.0,
                              snapshot_every=12000)
    return ScenarioSpec(tag="single_species", mode="P", params=params,
                        init=init, numerics=numerics,
                        expected={"u": "spreads"}).validate()


def _preset_problem_Q() -> ScenarioSpec:
    params = DEFAULT_PARAMS
    rb = check_region_B(params)
    init_u, v0 = build_Q_data(params, h0=3.0, v_background_level=1.0,
                              L_domain=100.0)
    numerics = NumericsConfig(n_cells=2000, dt=1e-3, t_end=150.0,
                              snapshot_every=15000)
    return ScenarioSpec(tag="problem_Q", mode="Q", params=params, init=init_u,
                        numerics=numerics, v_background=v0, L_domain=100.0,
                        margin=rb.margin,
                        expected={"u": "spreads", "u_speed": rb.c_star},
                        ).validate()


_BUILDERS = {
    "weak_strong_A2": _preset_weak_strong_A2,
    "region_B_i": lambda: build_trichotomy_preset("i"),
    "region_B_ii": lambda: build_trichotomy_preset("ii"),
    "region_B_iii": lambda: build_trichotomy_preset("iii"),
    "single_species": _preset_single_species,
    "problem_Q": _preset_problem_Q,
}

PRESET_NAMES = tuple(sorted(_BUILDERS))


def get_preset(name: str) -> ScenarioSpec:
    """Materialize a named preset (computes its speed constants on demand)."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise InvalidSpec(
            f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    return builder()
