"""Trajectory diagnostics: speed fits, segregation metrics, outcome labels.

The asymptotic statements being verified (front speed limits, mass
segregation, spreading/vanishing) are finite-horizon checked with explicit
proxies; "undecided" is the honest fallback when neither rule fires.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import EmptyBand, WindowTooShort
from .model import ModelParams, SimState
from .semiwave import compute_R_star, compute_c_star, compute_s_star
from .simulate import Trajectory, cross_grid_sample

__all__ = [
    "SpeedReport",
    "SegregationMetrics",
    "Outcome",
    "TrichotomyThresholds",
    "fit_front_speed",
    "speed_report",
    "segregation_metrics",
    "classify_outcome",
    "check_region_B",
    "trichotomy_thresholds",
]

# finite-horizon proxies for the asymptotic definitions
VANISH_SUP_TOL = 1e-3
VANISH_FRONT_TOL = 1e-4   # relative to the initial front
SPREAD_FRONT_FACTOR = 3.0
SPREAD_PLATEAU_DELTA = 0.1
DEFAULT_EPS = 0.1
DEFAULT_WINDOW = 0.5


@dataclass(frozen=True)
class SpeedReport:
    species: str
    slope: float
    t_lo: float
    t_hi: float
    max_residual: float
    predicted: float | None = None
    rel_err: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SegregationMetrics:
    eps: float
    t: float
    sup_u_dev_inner: float   # sup |u - 1| on [0, (1-eps)*c_hat*t]
    sup_v_dev_shell: float   # sup |v - 1| on [(1+eps)*c_hat*t, (1-eps)*s_hat*t]
    sup_v_inner: float       # sup v on [0, (1-eps)*c_hat*t]

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Outcome:
    species: str
    status: str  # spreads | vanishes | undecided
    final_front: float
    front_growth: float  # over the trailing half
    final_sup: float
    plateau_length: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TrichotomyThresholds:
    """Critical initial radii separating the vanishing/spreading scenarios."""

    s_star_low: float   # R* sqrt(d/r): below this the invader cannot spread
    s_star_mid: float   # R* sqrt(d/(r(1-k))): above this the invader spreads
    s_star_v: float     # R*: critical radius for the resident species

    def to_dict(self) -> dict:
        return asdict(self)


def trichotomy_thresholds(params: ModelParams) -> TrichotomyThresholds:
    params.require_weak_strong()
    R_star = compute_R_star(params.N)
    return TrichotomyThresholds(
        s_star_low=R_star * math.sqrt(params.d / params.r),
        s_star_mid=R_star * math.sqrt(params.d / (params.r * (1 - params.k))),
        s_star_v=R_star,
    )


def fit_front_speed(times, fronts, window_fraction: float = DEFAULT_WINDOW,
                    species: str = "u") -> SpeedReport:
    """Least-squares slope of the front series over its trailing window."""
    t = np.asarray(times, dtype=float)
    s = np.asarray(fronts, dtype=float)
    if not 0 < window_fraction <= 0.5:
        raise WindowTooShort("window_fraction must be in (0, 0.5]")
    t_lo = t[-1] * (1.0 - window_fraction)
    mask = t >= t_lo
    if mask.sum() < 10:
        raise WindowTooShort(f"only {int(mask.sum())} points in the fit window")
    tw, sw = t[mask], s[mask]
    slope, intercept = np.polyfit(tw, sw, 1)
    resid = float(np.max(np.abs(sw - (slope * tw + intercept))))
    return SpeedReport(species=species, slope=float(slope),
                       t_lo=float(tw[0]), t_hi=float(tw[-1]),
                       max_residual=resid)


def speed_report(times, fronts, predicted: float,
                 window_fraction: float = DEFAULT_WINDOW,
                 species: str = "u") -> SpeedReport:
    """Fit the front speed and attach the predicted constant."""
    base = fit_front_speed(times, fronts, window_fraction, species)
    rel = abs(base.slope - predicted) / predicted
    return SpeedReport(species=base.species, slope=base.slope,
                       t_lo=base.t_lo, t_hi=base.t_hi,
                       max_residual=base.max_residual,
                       predicted=float(predicted), rel_err=float(rel))


def segregation_metrics(snapshot: SimState, c_hat: float, s_hat: float,
                        eps: float = DEFAULT_EPS,
                        samples_per_unit: float = 8.0) -> SegregationMetrics:
    """Sup norms of the segregation pattern on the two radius bands.

    Bands use relative margins: inner [0, (1-eps)*c_hat*t], shell
    [(1+eps)*c_hat*t, (1-eps)*s_hat*t].  Profiles are sampled on one fixed
    grid and masked per band, so enlarging eps (shrinking bands) can never
    increase a sup.
    """
    t = snapshot.t
    inner_hi = (1.0 - eps) * c_hat * t
    shell_lo = (1.0 + eps) * c_hat * t
    shell_hi = (1.0 - eps) * s_hat * t
    if inner_hi <= 0:
        raise EmptyBand("inner band is empty; snapshot time too small")
    if shell_lo >= shell_hi:
        raise EmptyBand("shell band is empty; eps too large for these speeds")
    n = max(64, int(math.ceil(shell_hi * samples_per_unit)))
    radii = np.linspace(0.0, shell_hi, n + 1)
    u = cross_grid_sample(snapshot.U, snapshot.s1, radii)
    v = cross_grid_sample(snapshot.V, snapshot.s2, radii)
    inner = radii <= inner_hi
    shell = (radii >= shell_lo) & (radii <= shell_hi)
    if not inner.any() or not shell.any():
        raise EmptyBand("band contains no sample points")
    return SegregationMetrics(
        eps=eps, t=t,
        sup_u_dev_inner=float(np.max(np.abs(u[inner] - 1.0))),
        sup_v_dev_shell=float(np.max(np.abs(v[shell] - 1.0))),
        sup_v_inner=float(np.max(v[inner])),
    )


def _plateau_length(profile: np.ndarray, front: float, delta: float) -> float:
    """Longest radius interval where the profile stays >= delta."""
    r = np.linspace(0.0, front, len(profile))
    above = profile >= delta
    best = run = 0
    for flag in above:
        run = run + 1 if flag else 0
        best = max(best, run)
    return 0.0 if best == 0 else best * (r[1] - r[0])


def _classify_species(times, fronts, profile, front_final, s0, species,
                      delta, tol) -> Outcome:
    mid = len(times) // 2
    growth = float(fronts[-1] - fronts[mid])
    sup = float(np.max(profile))
    plateau = _plateau_length(profile, front_final, delta)
    status = "undecided"
    if growth < VANISH_FRONT_TOL * s0 and sup < tol:
        status = "vanishes"
    elif fronts[-1] > SPREAD_FRONT_FACTOR * s0 and plateau >= delta:
        status = "spreads"
    return Outcome(species=species, status=status,
                   final_front=float(fronts[-1]), front_growth=growth,
                   final_sup=sup, plateau_length=plateau)


def classify_outcome(traj: Trajectory, delta: float = SPREAD_PLATEAU_DELTA,
                     tol: float = VANISH_SUP_TOL) -> dict[str, Outcome]:
    """Per-species spreading/vanishing labels from finite-horizon evidence.

    Vanishing needs a stalled front (growth below 1e-4 of the initial front
    over the trailing half) and a decayed sup norm; spreading needs the front
    to exceed three times its initial value plus a delta-plateau of length at
    least delta in the final snapshot.
    """
    final = traj.final()
    out = {"u": _classify_species(traj.times, traj.s1, final.U, final.s1,
                                  traj.s1[0], "u", delta, tol)}
    if traj.mode == "P":
        out["v"] = _classify_species(traj.times, traj.s2, final.V, final.s2,
                                     traj.s2[0], "v", delta, tol)
    return out


@dataclass(frozen=True)
class RegionBReport:
    c_star: float
    s_star: float
    margin: float  # c* - s*; positive means the fast-invader region

    @property
    def positive(self) -> bool:
        return self.margin > 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["positive"] = self.positive
        return d


def check_region_B(params: ModelParams) -> RegionBReport:
    """Sign of c*_mu1 - s*_mu2 (positive: at most one species can spread)."""
    params.require_weak_strong()
    c_star = compute_c_star(params)
    s_star = compute_s_star(1.0, 1.0, 1.0, params.mu2)
    return RegionBReport(c_star=c_star, s_star=s_star, margin=c_star - s_star)
