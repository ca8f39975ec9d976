"""Front-fixing time integration of the free boundary competition system.

Each moving domain [0, s_i(t)] is mapped onto the fixed interval [0, 1] by
R = r / s_i(t), which turns the moving boundary into a drift term
(s_i' R / s_i) dU/dR and lets both profiles live on static grids.  The default
scheme is IMEX: implicit diffusion (one tridiagonal solve per species per
step), explicit upwind drift, explicit reaction, front velocities lagged one
step.  An all-explicit scheme is available for step-size studies.

Two modes are provided: ``run_P`` advances both species with their own free
boundaries; ``run_Q`` advances the invader with a free boundary against a
resident species on a fixed truncated domain with zero-flux ends.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.linalg import solve_banded

from .errors import DomainTooSmall, InvalidSpec, StabilityFailure
from .model import InitialData, ModelParams, NumericsConfig, SimState

__all__ = [
    "Trajectory",
    "step",
    "run_P",
    "run_Q",
    "cross_grid_sample",
    "radial_laplacian_row",
    "resample_initial",
]

UNDERSHOOT_TOL = 1e-12


def radial_laplacian_row(R_index: int, front: float, N: int, n_cells: int):
    """3-point stencil of (phi_rr + (N-1)/r phi_r) / front^2 at one grid node.

    Node 0 uses the symmetry limit Delta phi -> N * phi_RR with the ghost node
    folded in; returns (lower, diag, upper) coefficients.
    """
    if not 0 <= R_index < n_cells:
        raise InvalidSpec("R_index must be in [0, n_cells)")
    dR = 1.0 / n_cells
    if R_index == 0:
        c = 2.0 * N / (dR * front) ** 2
        return (0.0, -c, c)
    R = R_index * dR
    base = 1.0 / (dR * front) ** 2
    cross = (N - 1) / (2 * dR * R * front**2)
    return (base - cross, -2.0 * base, base + cross)


def cross_grid_sample(source_profile: np.ndarray, source_front: float,
                      target_radii: np.ndarray) -> np.ndarray:
    """Sample a straightened profile at physical radii.

    Monotone cubic interpolation in r = R * front, extended by exact zero for
    radii at or beyond the front; tiny interpolation undershoots are clamped.
    """
    if not source_front > 0:
        raise InvalidSpec("source_front must be > 0")
    radii = np.asarray(target_radii, dtype=float)
    out = np.zeros_like(radii)
    inside = radii < source_front
    if inside.any():
        nodes = np.linspace(0.0, source_front, len(source_profile))
        interp = PchipInterpolator(nodes, source_profile, extrapolate=False)
        out[inside] = interp(radii[inside])
    return np.maximum(out, 0.0)


@dataclass
class Trajectory:
    """Stored output of one run: dense front series plus sparse snapshots."""

    mode: str  # "P" or "Q"
    params: ModelParams
    numerics: NumericsConfig
    times: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s1_dot: np.ndarray
    s2_dot: np.ndarray
    snapshots: list[SimState]
    crossings: list[float] = field(default_factory=list)
    L_domain: float | None = None  # Q mode: fixed domain for the resident

    def front_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,s1,s2,s1_dot,s2_dot\n")
        for i in range(len(self.times)):
            buf.write("%.17g,%.17g,%.17g,%.17g,%.17g\n" % (
                self.times[i], self.s1[i], self.s2[i],
                self.s1_dot[i], self.s2_dot[i]))
        return buf.getvalue()

    def snapshot_csv(self, snap: SimState) -> str:
        n = len(snap.U) - 1
        R = np.linspace(0.0, 1.0, n + 1)
        r_u = R * snap.s1
        if self.mode == "Q":
            r_v = np.linspace(0.0, self.L_domain, len(snap.V))
        else:
            r_v = R * snap.s2
        buf = io.StringIO()
        buf.write("R,r_u,u,r_v,v\n")
        for j in range(n + 1):
            buf.write("%.17g,%.17g,%.17g,%.17g,%.17g\n" % (
                R[j], r_u[j], snap.U[j], r_v[j], snap.V[j]))
        return buf.getvalue()

    def final(self) -> SimState:
        return self.snapshots[-1]


class _Workspace:
    """Per-run discretization tables for one straightened species."""

    def __init__(self, n: int, N: int, d: float):
        self.n = n
        self.N = N
        self.d = d
        self.dR = 1.0 / n
        j = np.arange(1, n)
        R = j * self.dR
        # laplacian stencils without the 1/front^2 factor
        self.lap_lo = 1.0 / self.dR**2 - (N - 1) / (2 * self.dR * R)
        self.lap_di = -2.0 / self.dR**2 * np.ones(n - 1)
        self.lap_up = 1.0 / self.dR**2 + (N - 1) / (2 * self.dR * R)
        self.lap_row0 = (-2.0 * N / self.dR**2, 2.0 * N / self.dR**2)
        self.R = np.linspace(0.0, 1.0, n + 1)
        self._ab = np.zeros((3, n + 1))

    def front_derivative(self, prof: np.ndarray) -> float:
        # second-order one-sided, prof[n] == 0
        return (-4 * prof[self.n - 1] + prof[self.n - 2]) / (2 * self.dR)

    def lap_explicit(self, prof: np.ndarray, front: float) -> np.ndarray:
        out = np.zeros_like(prof)
        out[0] = self.lap_row0[0] * prof[0] + self.lap_row0[1] * prof[1]
        out[1:-1] = (self.lap_lo * prof[:-2] + self.lap_di * prof[1:-1]
                     + self.lap_up * prof[2:])
        return out * (self.d / front**2)

    def diffuse_implicit(self, rhs: np.ndarray, front: float, dt: float) -> np.ndarray:
        fac = dt * self.d / front**2
        n, ab = self.n, self._ab
        ab[:] = 0.0
        ab[1, 0] = 1.0 - fac * self.lap_row0[0]
        ab[0, 1] = -fac * self.lap_row0[1]
        ab[1, 1:n] = 1.0 - fac * self.lap_di
        ab[0, 2:n + 1] = -fac * self.lap_up
        ab[2, 0:n - 1] = -fac * self.lap_lo
        ab[1, n] = 1.0
        ab[2, n - 1] = 0.0
        return solve_banded((1, 1), ab, rhs)

    def drift_upwind(self, prof: np.ndarray, sdot: float, front: float) -> np.ndarray:
        # drift coefficient sdot*R/front >= 0: information flows leftward,
        # upwind is the forward difference
        out = np.zeros_like(prof)
        a = sdot * self.R / front
        out[1:-1] = a[1:-1] * (prof[2:] - prof[1:-1]) / self.dR
        return out


def _postprocess(prof: np.ndarray, t: float) -> np.ndarray:
    if not np.isfinite(prof).all():
        raise StabilityFailure(f"non-finite profile at t={t:g}; reduce dt", t=t)
    low = prof.min()
    if low < -UNDERSHOOT_TOL:
        raise StabilityFailure(
            f"undershoot {low:.3e} at t={t:g}; reduce dt", t=t)
    if low < 0.0:
        np.maximum(prof, 0.0, out=prof)
    return prof


def _advance_front(prof, ws, mu, front, dt):
    sdot = -mu * ws.front_derivative(prof) / front
    if sdot < 0.0:
        sdot = 0.0  # gradient-sign noise; fronts never retreat
    return sdot, front + dt * sdot


def _step_pair(U, V, s1, s2, params, num, wu, wv, t):
    """One time step of the two-free-boundary system on raw arrays."""
    p = params
    s1_dot, s1n = _advance_front(U, wu, p.mu1, s1, num.dt)
    s2_dot, s2n = _advance_front(V, wv, p.mu2, s2, num.dt)

    v_at_u = cross_grid_sample(V, s2, wu.R * s1)
    u_at_v = cross_grid_sample(U, s1, wv.R * s2)
    react_u = p.r * U * (1.0 - U - p.k * v_at_u)
    react_v = V * (1.0 - V - p.h * u_at_v)
    rhs_u = U + num.dt * (wu.drift_upwind(U, s1_dot, s1n) + react_u)
    rhs_v = V + num.dt * (wv.drift_upwind(V, s2_dot, s2n) + react_v)
    rhs_u[-1] = 0.0
    rhs_v[-1] = 0.0
    if num.scheme == "imex":
        Un = wu.diffuse_implicit(rhs_u, s1n, num.dt)
        Vn = wv.diffuse_implicit(rhs_v, s2n, num.dt)
    else:
        Un = rhs_u + num.dt * wu.lap_explicit(U, s1n)
        Vn = rhs_v + num.dt * wv.lap_explicit(V, s2n)
        Un[-1] = 0.0
        Vn[-1] = 0.0
    return (_postprocess(Un, t), _postprocess(Vn, t),
            s1n, s2n, s1_dot, s2_dot)


def step(state: SimState, params: ModelParams, numerics: NumericsConfig) -> SimState:
    """Advance the two-free-boundary system by one time step (pure)."""
    params.validate()
    numerics.validate()
    state.validate()
    n = len(state.U) - 1
    m = len(state.V) - 1
    wu = _Workspace(n, params.N, params.d)
    wv = _Workspace(m, params.N, 1.0)
    U, V, s1, s2, s1_dot, s2_dot = _step_pair(
        state.U.copy(), state.V.copy(), state.s1, state.s2,
        params, numerics, wu, wv, state.t + numerics.dt)
    return SimState(t=state.t + numerics.dt, s1=s1, s2=s2,
                    s1_dot=s1_dot, s2_dot=s2_dot, U=U, V=V)


def resample_initial(front: float, profile: np.ndarray, n: int) -> np.ndarray:
    """Resample sampled initial data onto the straightened n-cell grid."""
    out = cross_grid_sample(np.asarray(profile, dtype=float), front,
                            np.linspace(0.0, front, n + 1))
    out[-1] = 0.0
    return out


def run_P(params: ModelParams, init: InitialData,
          numerics: NumericsConfig) -> Trajectory:
    """Integrate the two-free-boundary system up to t_end.

    Returns the dense front series and snapshots every ``snapshot_every``
    steps (the final state is always stored).  Front crossings (s1 overtaking
    s2 or vice versa) are recorded in the trajectory metadata.
    """
    params.validate()
    numerics.validate()
    init.validate()
    if init.s2_0 is None:
        raise InvalidSpec("run_P needs initial data for both species")
    n = numerics.n_cells
    wu = _Workspace(n, params.N, params.d)
    wv = _Workspace(n, params.N, 1.0)
    U = resample_initial(init.s1_0, init.u0, n)
    V = resample_initial(init.s2_0, init.v0, n)
    s1, s2 = init.s1_0, init.s2_0

    nsteps = int(round(numerics.t_end / numerics.dt))
    times = numerics.dt * np.arange(nsteps + 1)
    s1s = np.empty(nsteps + 1)
    s2s = np.empty(nsteps + 1)
    d1s = np.zeros(nsteps + 1)
    d2s = np.zeros(nsteps + 1)
    s1s[0], s2s[0] = s1, s2
    snaps = [SimState(t=0.0, s1=s1, s2=s2, s1_dot=0.0, s2_dot=0.0,
                      U=U.copy(), V=V.copy())]
    crossings: list[float] = []
    sign = math.copysign(1.0, s2 - s1)
    for i in range(1, nsteps + 1):
        t = times[i]
        U, V, s1, s2, s1_dot, s2_dot = _step_pair(
            U, V, s1, s2, params, numerics, wu, wv, t)
        s1s[i], s2s[i], d1s[i], d2s[i] = s1, s2, s1_dot, s2_dot
        if (s2 - s1) * sign < 0:
            sign = -sign
            crossings.append(float(t))
        if i % numerics.snapshot_every == 0 or i == nsteps:
            snaps.append(SimState(t=float(t), s1=s1, s2=s2, s1_dot=s1_dot,
                                  s2_dot=s2_dot, U=U.copy(), V=V.copy()))
    return Trajectory(mode="P", params=params, numerics=numerics,
                      times=times, s1=s1s, s2=s2s, s1_dot=d1s, s2_dot=d2s,
                      snapshots=snaps, crossings=crossings)


def run_Q(params: ModelParams, init_u: InitialData, v0_background: np.ndarray,
          L_domain: float, numerics: NumericsConfig) -> Trajectory:
    """Integrate the single-free-boundary system against a resident species.

    The invader u carries the free boundary (straightened as in ``run_P``);
    the resident v lives on the fixed domain [0, L_domain] with zero-flux
    conditions at both ends.  Raises DomainTooSmall when the front reaches
    0.9 * L_domain.
    """
    params.validate()
    numerics.validate()
    init_u.validate()
    v0 = np.asarray(v0_background, dtype=float)
    if not L_domain > 0:
        raise InvalidSpec("L_domain must be > 0")
    if v0.ndim != 1 or len(v0) < 5 or np.any(v0 < 0) or not np.isfinite(v0).all():
        raise InvalidSpec("v0_background must be a finite non-negative profile")
    tail = v0[int(0.9 * (len(v0) - 1)):]
    if not np.min(tail) > 0:
        raise InvalidSpec("v0_background must stay positive near the far end")

    n = numerics.n_cells
    wu = _Workspace(n, params.N, params.d)
    U = resample_initial(init_u.s1_0, init_u.u0, n)
    m = n
    dr = L_domain / m
    rv = np.linspace(0.0, L_domain, m + 1)
    v_nodes = np.linspace(0.0, L_domain, len(v0))
    V = np.maximum(PchipInterpolator(v_nodes, v0)(rv), 0.0)
    h = init_u.s1_0

    def sample_v(radii):
        interp = PchipInterpolator(rv, V, extrapolate=False)
        return np.maximum(interp(np.clip(radii, 0.0, L_domain)), 0.0)

    # fixed-grid banded matrix for v (Neumann at r=0 and r=L_domain)
    j = np.arange(1, m)
    rj = j * dr
    lo = 1.0 / dr**2 - (params.N - 1) / (2 * dr * rj)
    di = -2.0 / dr**2 * np.ones(m - 1)
    up = 1.0 / dr**2 + (params.N - 1) / (2 * dr * rj)
    ab = np.zeros((3, m + 1))
    dt = numerics.dt
    ab[1, 0] = 1.0 + 2.0 * params.N * dt / dr**2
    ab[0, 1] = -2.0 * params.N * dt / dr**2
    ab[1, 1:m] = 1.0 - dt * di
    ab[0, 2:m + 1] = -dt * up
    ab[2, 0:m - 1] = -dt * lo
    ab[1, m] = 1.0 + 2.0 * dt / dr**2
    ab[2, m - 1] = -2.0 * dt / dr**2

    nsteps = int(round(numerics.t_end / dt))
    times = dt * np.arange(nsteps + 1)
    hs = np.empty(nsteps + 1)
    hds = np.zeros(nsteps + 1)
    hs[0] = h
    snaps = [SimState(t=0.0, s1=h, s2=L_domain, s1_dot=0.0, s2_dot=0.0,
                      U=U.copy(), V=V.copy())]
    for i in range(1, nsteps + 1):
        t = times[i]
        h_dot, hn = _advance_front(U, wu, params.mu1, h, dt)
        if hn >= 0.9 * L_domain:
            raise DomainTooSmall(
                f"front reached 0.9*L_domain at t={t:g}", t=float(t))
        v_at_u = sample_v(wu.R * h)
        u_at_v = cross_grid_sample(U, h, rv)
        rhs_u = U + dt * (wu.drift_upwind(U, h_dot, hn)
                          + params.r * U * (1.0 - U - params.k * v_at_u))
        rhs_u[-1] = 0.0
        rhs_v = V + dt * V * (1.0 - V - params.h * u_at_v)
        if numerics.scheme == "imex":
            U = wu.diffuse_implicit(rhs_u, hn, dt)
            V = solve_banded((1, 1), ab, rhs_v)
        else:
            raise InvalidSpec("run_Q supports only the imex scheme")
        U = _postprocess(U, t)
        V = _postprocess(V, t)
        h = hn
        hs[i], hds[i] = h, h_dot
        if i % numerics.snapshot_every == 0 or i == nsteps:
            snaps.append(SimState(t=float(t), s1=h, s2=L_domain, s1_dot=h_dot,
                                  s2_dot=0.0, U=U.copy(), V=V.copy()))
    return Trajectory(mode="Q", params=params, numerics=numerics,
                      times=times, s1=hs, s2=np.full(nsteps + 1, L_domain),
                      s1_dot=hds, s2_dot=np.zeros(nsteps + 1),
                      snapshots=snaps, L_domain=L_domain)
