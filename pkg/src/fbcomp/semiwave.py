"""Semi-wave boundary value solvers and the speed constants they define.

A semi-wave is a traveling profile on a half line that vanishes at the front;
its speed is pinned by the Stefan matching condition c = mu * |profile'(0)|.
This module computes

* the scalar logistic semi-wave and its matched speed ``compute_s_star``,
* the coupled competition semi-wave and its matched speed ``compute_c_star``,
* the critical radius ``compute_R_star`` (principal Dirichlet eigenvalue of
  the Laplacian on a ball equal to one),
* a numerical bracket for the minimal coupled-wave speed ``estimate_c0``.

Default truncation lengths and grid spacings are scale covariant (they shrink
with the profile's decay length), so exact rescaling identities between
parameter sets survive discretization to well below 1e-6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import solve_banded

from .errors import BracketFailure, InvalidSpec, NonConvergence
from .model import ModelParams

__all__ = [
    "ScalarSemiWaveSpec",
    "ScalarSemiWaveSolution",
    "CoupledSemiWaveSpec",
    "CoupledSemiWaveSolution",
    "solve_scalar_semiwave",
    "compute_s_star",
    "solve_coupled_semiwave",
    "compute_c_star",
    "compute_R_star",
    "estimate_c0",
]

NEWTON_TOL = 1e-10
SWEEP_TOL = 1e-9
SPEED_TOL = 1e-8
DEGENERATE_MAX = 1e-3
_TRUNC = 40.0  # truncation length in decay-length units
_CELLS_PER_UNIT = 100  # grid cells per decay length


@dataclass(frozen=True)
class ScalarSemiWaveSpec:
    """Scalar semi-wave problem d q'' + s q' + q (a - b q) = 0 on [-L, 0]."""

    a: float
    b: float
    d: float
    s: float
    L: float
    n: int

    def validate(self) -> "ScalarSemiWaveSpec":
        if min(self.a, self.b, self.d, self.L) <= 0:
            raise InvalidSpec("a, b, d, L must be > 0")
        if self.n < 16:
            raise InvalidSpec("n must be >= 16")
        if not 0 <= self.s < 2 * math.sqrt(self.a * self.d):
            raise InvalidSpec("need 0 <= s < 2*sqrt(a*d)")
        return self

    @classmethod
    def default(cls, a, b, d, s) -> "ScalarSemiWaveSpec":
        # covariant truncation: L and the spacing both scale with sqrt(d/a)
        scale = math.sqrt(d / a)
        return cls(a=a, b=b, d=d, s=s, L=_TRUNC * scale,
                   n=int(_TRUNC * _CELLS_PER_UNIT))


@dataclass(frozen=True)
class ScalarSemiWaveSolution:
    xi: np.ndarray
    q: np.ndarray
    dq0: float  # one-sided derivative q'(0)
    converged: bool
    residual: float
    iterations: int


@dataclass(frozen=True)
class CoupledSemiWaveSpec:
    """Coupled semi-wave system at candidate speed c.

    U satisfies c U' + d U'' + r U (1 - U - k V) = 0 on [-L_left, 0] with
    U(-L_left)=1, U(0)=0 and is extended by zero to the right; V satisfies
    c V' + V'' + V (1 - V - h U) = 0 on [-L_left, L_right] with V(-L_left)=0,
    V(L_right)=1.  Both grids must share one spacing.
    """

    d: float
    r: float
    h: float
    k: float
    c: float
    L_left: float
    L_right: float
    n_left: int
    n_right: int

    def validate(self) -> "CoupledSemiWaveSpec":
        if min(self.d, self.r, self.h, self.L_left, self.L_right) <= 0:
            raise InvalidSpec("d, r, h, L_left, L_right must be > 0")
        if self.k < 0:
            raise InvalidSpec("k must be >= 0")
        if self.k != 0 and not (0 < self.k < 1 < self.h):
            raise InvalidSpec("need 0 < k < 1 < h")
        if self.c < 0:
            raise InvalidSpec("c must be >= 0")
        if min(self.n_left, self.n_right) < 16:
            raise InvalidSpec("n_left, n_right must be >= 16")
        if abs(self.L_left / self.n_left - self.L_right / self.n_right) > 1e-12:
            raise InvalidSpec("U and V grids must share one spacing")
        return self

    @classmethod
    def default(cls, d, r, h, k, c) -> "CoupledSemiWaveSpec":
        # spacing covariant with the U decay length so that the k=0 case
        # reproduces the scalar solver's grid exactly
        dx = math.sqrt(d / r) / _CELLS_PER_UNIT
        n_left = int(_TRUNC * _CELLS_PER_UNIT)
        n_right = max(16, int(round(_TRUNC / dx)))
        return cls(d=d, r=r, h=h, k=k, c=c,
                   L_left=n_left * dx, L_right=n_right * dx,
                   n_left=n_left, n_right=n_right)


@dataclass(frozen=True)
class CoupledSemiWaveSolution:
    xi: np.ndarray  # shared grid on [-L_left, L_right]
    U: np.ndarray   # zero for xi > 0
    V: np.ndarray
    dU0: float      # one-sided derivative U'(0)
    degenerate: bool
    iterations: int
    residual: float


def _newton_bvp(y, coef_d, c, f, fprime, dx, tol=NEWTON_TOL, maxit=100,
                scale=1.0):
    """Damped Newton for coef_d*y'' + c*y' + f(y) = 0, Dirichlet ends.

    y[0] and y[-1] hold the boundary values and are not touched.  The drift
    uses central differences: at the default spacing the cell Peclet number
    stays far below one, so no upwinding is needed and second-order accuracy
    is kept.  ``scale`` sets the residual magnitude of the problem (the
    tolerance is tol*scale); a stalled line search within 100x of tolerance
    is accepted, beyond that it raises.
    """
    n = len(y) - 1
    tol = tol * max(scale, 1.0)

    def residual(yv):
        ym, yc, yp = yv[:-2], yv[1:-1], yv[2:]
        return (coef_d * (yp - 2 * yc + ym) / dx**2
                + c * (yp - ym) / (2 * dx) + f(yc))

    F = residual(y)
    res = float(np.max(np.abs(F)))
    ab = np.zeros((3, n - 1))
    for it in range(maxit):
        if res < tol:
            return y, it, res
        yc = y[1:-1]
        ab[0, 1:] = coef_d / dx**2 + c / (2 * dx)
        ab[1, :] = -2 * coef_d / dx**2 + fprime(yc)
        ab[2, :-1] = coef_d / dx**2 - c / (2 * dx)
        dy = solve_banded((1, 1), ab, -F)
        lam = 1.0
        for _ in range(50):
            trial = y.copy()
            trial[1:-1] = yc + lam * dy
            Ft = residual(trial)
            rt = float(np.max(np.abs(Ft)))
            if rt < res or rt < tol:
                y, F, res = trial, Ft, rt
                break
            lam *= 0.5
        else:
            if res < 100 * tol:
                return y, it + 1, res
            raise NonConvergence(f"Newton line search stalled at residual {res:g}")
    raise NonConvergence(f"Newton did not reach {tol:g}, residual {res:g}")


def _one_sided(prof_last3, dx):
    """Second-order one-sided derivative at the right end (value there is 0)."""
    qm2, qm1, q0 = prof_last3
    return (3 * q0 - 4 * qm1 + qm2) / (2 * dx)


def solve_scalar_semiwave(spec: ScalarSemiWaveSpec,
                          q_init: np.ndarray | None = None) -> ScalarSemiWaveSolution:
    """Newton-solve the scalar semi-wave two-point BVP.

    Boundary values are clamped to q(-L) = a/b and q(0) = 0; the truncation
    error is exponentially small in L.  ``q_init`` can warm-start the Newton
    iteration (used by the bisection in :func:`compute_s_star`).
    """
    spec.validate()
    a, b, d, s, L, n = spec.a, spec.b, spec.d, spec.s, spec.L, spec.n
    dx = L / n
    xi = np.linspace(-L, 0.0, n + 1)
    if q_init is not None and len(q_init) == n + 1:
        q = q_init.copy()
    else:
        q = (a / b) * np.minimum(1.0, -xi * math.sqrt(a / d) / 4.0)
    q[0] = a / b
    q[-1] = 0.0
    q, its, res = _newton_bvp(
        q, d, s,
        lambda y: y * (a - b * y),
        lambda y: a - 2 * b * y,
        dx,
        scale=a * a / b,
    )
    dq0 = _one_sided((q[-3], q[-2], q[-1]), dx)
    return ScalarSemiWaveSolution(xi=xi, q=q, dq0=float(dq0),
                                  converged=True, residual=res, iterations=its)


def compute_s_star(a: float, b: float, d: float, mu: float,
                   tol: float = SPEED_TOL,
                   L: float | None = None, n: int | None = None) -> float:
    """Speed s* with mu*|q'(0)| = s*, by bisection on (0, 2*sqrt(a*d)).

    The matching defect phi(s) = mu*|q_s'(0)| - s is strictly decreasing;
    the bracket is checked for a sign change before bisecting.
    """
    if min(a, b, d, mu, tol) <= 0:
        raise InvalidSpec("a, b, d, mu, tol must be > 0")
    base = ScalarSemiWaveSpec.default(a, b, d, 0.0)
    if L is not None:
        n_eff = n if n is not None else int(round(L / (base.L / base.n)))
        base = ScalarSemiWaveSpec(a=a, b=b, d=d, s=0.0, L=L, n=n_eff)
    s_max = 2 * math.sqrt(a * d)

    def phi(s):
        try:
            sol = solve_scalar_semiwave(
                ScalarSemiWaveSpec(a=a, b=b, d=d, s=s, L=base.L, n=base.n))
        except NonConvergence:
            # profile collapse near s = 2*sqrt(ad): |q'(0)| -> 0, so phi < 0
            return -s - 1.0
        return mu * abs(sol.dq0) - s

    lo, hi = 1e-12 * s_max, s_max * (1 - 1e-9)
    if not (phi(lo) > 0 > phi(hi)):
        raise BracketFailure(
            "matching defect does not change sign on (0, 2*sqrt(a*d)); "
            "truncation length may be too small")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if phi(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_coupled_semiwave(spec: CoupledSemiWaveSpec,
                           init: tuple[np.ndarray, np.ndarray] | None = None,
                           max_sweeps: int = 500) -> CoupledSemiWaveSolution:
    """Solve the coupled semi-wave system by alternating Newton sweeps.

    Each sweep freezes one species and Newton-solves the other's two-point
    BVP; sweeps repeat until successive iterates differ by less than 1e-9 in
    sup norm.  The solve is flagged degenerate when U has collapsed toward
    (0, 1) on the right half of its domain, the numerical signature of
    c >= c0 (no semi-wave exists there).
    """
    spec.validate()
    d, r, h, k, c = spec.d, spec.r, spec.h, spec.k, spec.c
    dx = spec.L_left / spec.n_left
    nl, nr = spec.n_left, spec.n_right
    xi = np.linspace(-spec.L_left, spec.L_right, nl + nr + 1)
    iu = nl  # index of xi = 0

    if init is not None:
        U = init[0].copy()
        V = init[1].copy()
    else:
        U = np.zeros(nl + nr + 1)
        # same ramp as the scalar solver so the k -> 0 limit lands on the
        # identical Newton branch
        U[: iu + 1] = np.minimum(1.0, -xi[: iu + 1] * math.sqrt(r / d) / 4.0)
        V = np.minimum(1.0, np.maximum(0.0, 1.0 + xi / 10.0))
    U[0], U[iu:] = 1.0, 0.0
    V[0], V[-1] = 0.0, 1.0

    residual = math.inf
    for sweep in range(max_sweeps):
        Vu = V[1:iu]
        Unew, _, res_u = _newton_bvp(
            U[: iu + 1].copy(), d, c,
            lambda y: r * y * (1 - y - k * Vu),
            lambda y: r * (1 - 2 * y - k * Vu),
            dx,
            scale=r,
        )
        Ufull = np.zeros_like(U)
        Ufull[: iu + 1] = Unew
        Uc = Ufull[1:-1]
        Vnew, _, res_v = _newton_bvp(
            V.copy(), 1.0, c,
            lambda y: y * (1 - y - h * Uc),
            lambda y: 1 - 2 * y - h * Uc,
            dx,
            scale=h,
        )
        change = max(float(np.max(np.abs(Unew - U[: iu + 1]))),
                     float(np.max(np.abs(Vnew - V))))
        U, V = Ufull, Vnew
        residual = max(res_u, res_v)
        if change < SWEEP_TOL:
            dU0 = _one_sided((U[iu - 2], U[iu - 1], U[iu]), dx)
            degenerate = bool(np.max(U[iu // 2: iu + 1]) < DEGENERATE_MAX)
            return CoupledSemiWaveSolution(
                xi=xi, U=U, V=V, dU0=float(dU0),
                degenerate=degenerate, iterations=sweep + 1, residual=residual)
    raise NonConvergence(f"alternating sweeps did not settle below {SWEEP_TOL:g}")


def compute_c_star(params: ModelParams, tol: float = SPEED_TOL) -> float:
    """Matched speed c* of the coupled semi-wave, c* = mu1 * |U'(0)|.

    Bisects psi(c) = mu1*|U_c'(0)| - c on (0, 2*sqrt(r*d)); degenerate solves
    count as psi < 0 since |U'(0)| vanishes there.  The front-derivative sign
    convention follows the Stefan condition (U'(0) < 0, speeds positive).
    """
    params.validate()
    params.require_weak_strong()
    if tol <= 0:
        raise InvalidSpec("tol must be > 0")
    c_max = 2 * math.sqrt(params.r * params.d)

    def psi(c):
        try:
            sol = solve_coupled_semiwave(
                CoupledSemiWaveSpec.default(params.d, params.r, params.h,
                                            params.k, c))
        except NonConvergence:
            # at or beyond c0 no semi-wave exists; count as degenerate
            return -c - 1.0
        if sol.degenerate:
            return -c - 1.0
        return params.mu1 * abs(sol.dU0) - c

    lo, hi = 1e-12 * c_max, c_max * (1 - 1e-9)
    if not (psi(lo) > 0 > psi(hi)):
        raise BracketFailure(
            "matching defect does not change sign on (0, 2*sqrt(r*d))")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if psi(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def compute_R_star(N: int, tol: float = 1e-10) -> float:
    """Critical radius: first zero of the radial profile of -Delta at eigenvalue 1.

    Integrates phi'' + (N-1)/r phi' + phi = 0 from phi(0)=1, phi'(0)=0 and
    locates the first sign change (N=1 gives pi/2, N=3 gives pi).
    """
    if not (isinstance(N, int) and N >= 1):
        raise InvalidSpec("N must be an integer >= 1")

    def rhs(rr, y):
        phi, dphi = y
        return [dphi, -phi - (N - 1) / rr * dphi]

    def hit_zero(rr, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1

    # start just off the axis with the series phi = 1 - r^2/(2N) + O(r^4)
    r0 = 1e-8
    y0 = [1.0 - r0**2 / (2 * N), -r0 / N]
    sol = solve_ivp(rhs, (r0, 4.0 + 2.0 * N), y0, method="DOP853",
                    rtol=1e-13, atol=1e-15, events=hit_zero, dense_output=True)
    if not sol.t_events[0].size:
        raise NonConvergence("no zero crossing found")  # pragma: no cover
    return float(sol.t_events[0][0])


def estimate_c0(params: ModelParams, step: float = 1e-3) -> tuple[float, float]:
    """Bracket the minimal coupled-wave speed by bisecting on degeneracy.

    Returns (c_lo, c_hi) with a non-degenerate solve at c_lo, a degenerate one
    at c_hi and c_hi - c_lo <= step.  The exact minimal speed is out of scope;
    the bracket lands inside [2*sqrt(r*d*(1-k)), 2*sqrt(r*d)] up to solver
    resolution.
    """
    params.validate()
    params.require_weak_strong()
    if step <= 0:
        raise InvalidSpec("step must be > 0")

    # near the minimal speed the transition layer drifts toward the left
    # truncation; an enlarged domain keeps the detection bias below the
    # default step (empirically O(1/L))
    dx = math.sqrt(params.d / params.r) / _CELLS_PER_UNIT
    n_side = 8 * int(_TRUNC * _CELLS_PER_UNIT)
    L_side = n_side * dx

    def degen(c):
        try:
            sol = solve_coupled_semiwave(CoupledSemiWaveSpec(
                d=params.d, r=params.r, h=params.h, k=params.k, c=c,
                L_left=L_side, L_right=L_side,
                n_left=n_side, n_right=n_side))
        except NonConvergence:
            return True
        return sol.degenerate

    lo = 0.0
    hi = 2 * math.sqrt(params.r * params.d) * 1.01
    if degen(lo):
        raise BracketFailure("degenerate already at c = 0")
    if not degen(hi):
        raise BracketFailure("no degeneracy below 1.01 * 2*sqrt(r*d)")
    while hi - lo > step:
        mid = 0.5 * (lo + hi)
        if degen(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi
