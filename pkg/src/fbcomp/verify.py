"""Acceptance checks shared by the CLI `verify` subcommand and the tests.

Fast level: speed-constant identities and solver properties (no PDE runs).
Full level: adds the PDE reproductions (two-speed spreading, segregation,
single-front invasion, trichotomy) plus numerical hygiene on every stored
trajectory.  Expensive runs are executed once and shared across checks.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .diagnostics import segregation_metrics, speed_report
from .model import InitialData, ModelParams, NumericsConfig
from .runner import run_preset, run_scenario
from .scenarios import DEFAULT_PARAMS, get_preset
from .semiwave import (ScalarSemiWaveSpec, compute_R_star, compute_c_star,
                       compute_s_star, solve_scalar_semiwave)
from .simulate import Trajectory, cross_grid_sample, run_P

from .diagnostics import classify_outcome

__all__ = ["CheckResult", "fast_checks", "full_checks", "run_checks",
           "FAST_NAMES", "FULL_NAMES"]

SPEED_FIT_RTOL = 0.05
SEGREGATION_SUP = 0.05
ENDPOINT_TOL = 0.05
CONVERGENCE_ORDER_MIN = 0.8
RNG_SEED = 20260823

FAST_NAMES = ("critical_radius", "scalar_anchor", "scaling_identity",
              "decoupling_and_bounds", "monotonicity_ladders")
FULL_NAMES = FAST_NAMES + ("two_speed_spreading", "segregation",
                           "single_front_invasion", "trichotomy",
                           "numerical_hygiene")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float

    def to_dict(self) -> dict:
        return asdict(self)


def _run(name, fn, *args) -> CheckResult:
    t0 = time.perf_counter()
    try:
        passed, detail = fn(*args)
    except Exception as exc:  # a crash is a failing check, not a crash
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name=name, passed=bool(passed), detail=detail,
                       elapsed=time.perf_counter() - t0)


# ---------------------------------------------------------------- fast level

def _check_critical_radius():
    errs = [abs(compute_R_star(1) - math.pi / 2),
            abs(compute_R_star(3) - math.pi)]
    err2 = abs(compute_R_star(2) - 2.404825557695773)
    ok = max(errs) < 1e-10 and err2 < 1e-8
    return ok, (f"N=1,3 err {max(errs):.2e} (tol 1e-10); "
                f"N=2 err {err2:.2e} (tol 1e-8)")


def _check_scalar_anchor():
    rng = np.random.default_rng(RNG_SEED)
    worst = 0.0
    for _ in range(5):
        a, b, d = np.exp(rng.uniform(np.log(0.2), np.log(5.0), 3))
        sol = solve_scalar_semiwave(ScalarSemiWaveSpec.default(a, b, d, 0.0))
        exact = a ** 1.5 / (math.sqrt(3.0 * d) * b)
        worst = max(worst, abs(abs(sol.dq0) - exact) / exact)
    return worst < 1e-4, f"worst |q'(0)| rel err {worst:.2e} (tol 1e-4)"


def _check_scaling_identity():
    rng = np.random.default_rng(RNG_SEED + 1)
    worst = 0.0
    for _ in range(10):
        a, b, d, mu = np.exp(rng.uniform(np.log(0.2), np.log(5.0), 4))
        lhs = compute_s_star(a, b, d, mu)
        rhs = math.sqrt(a * d) * compute_s_star(1.0, 1.0, 1.0, mu * a / (b * d))
        worst = max(worst, abs(lhs - rhs) / rhs)
    small = compute_s_star(1.0, 1.0, 1.0, 0.01)
    asym = 0.01 / math.sqrt(3.0)
    asym_err = abs(small - asym) / asym
    ok = worst < 1e-6 and asym_err < 0.05
    return ok, (f"scaling worst rel err {worst:.2e} (tol 1e-6); "
                f"small-mu asymptote err {asym_err:.2%} (tol 5%)")


def _check_decoupling_and_bounds():
    sets = [(1.0, 1.0, 1.0), (2.0, 0.5, 1.0), (0.5, 2.0, 3.0)]
    worst = 0.0
    msgs = []
    for d, r, mu1 in sets:
        # an effectively-zero k decouples the two equations
        p = ModelParams(d=d, r=r, h=2.0, k=1e-30, mu1=mu1, mu2=1.0)
        c = compute_c_star(p)
        s = compute_s_star(r, r, d, mu1)
        worst = max(worst, abs(c - s) / s)
        if not 0 < c < 2 * math.sqrt(r * d):
            msgs.append(f"c* bound violated at d={d}, r={r}")
    for a, b, d, mu in [(1, 1, 1, 0.5), (3, 2, 0.7, 10.0)]:
        s = compute_s_star(a, b, d, mu)
        if not 0 < s < 2 * math.sqrt(a * d):
            msgs.append(f"s* bound violated at a={a}")
    ok = worst < 1e-6 and not msgs
    return ok, (f"decoupling worst rel err {worst:.2e} (tol 1e-6); " +
                ("; ".join(msgs) if msgs else "all bounds hold"))


def _check_monotonicity_ladders():
    ladder = (0.1, 0.5, 1.0, 5.0, 20.0)
    cs = [compute_c_star(replace(DEFAULT_PARAMS, mu1=m)) for m in ladder]
    ss = [compute_s_star(1.0, 1.0, 1.0, m) for m in ladder]
    c_ok = all(x < y for x, y in zip(cs, cs[1:]))
    s_ok = all(x < y for x, y in zip(ss, ss[1:]))
    return c_ok and s_ok, (f"c* ladder {['%.4f' % c for c in cs]} strict={c_ok}; "
                           f"s* ladder {['%.4f' % s for s in ss]} strict={s_ok}")


def fast_checks() -> list[CheckResult]:
    return [
        _run("critical_radius", _check_critical_radius),
        _run("scalar_anchor", _check_scalar_anchor),
        _run("scaling_identity", _check_scaling_identity),
        _run("decoupling_and_bounds", _check_decoupling_and_bounds),
        _run("monotonicity_ladders", _check_monotonicity_ladders),
    ]


# ---------------------------------------------------------------- full level

_PDE_PRESETS = ("weak_strong_A2", "problem_Q", "region_B_i", "region_B_ii",
                "region_B_iii")


def _check_two_speed(spec, traj):
    ru = speed_report(traj.times, traj.s1, spec.expected["u_speed"],
                      species="u")
    rv = speed_report(traj.times, traj.s2, spec.expected["v_speed"],
                      species="v")
    ok = ru.rel_err < SPEED_FIT_RTOL and rv.rel_err < SPEED_FIT_RTOL
    return ok, (f"s1 slope {ru.slope:.5f} vs c* {ru.predicted:.5f} "
                f"({ru.rel_err:.2%}); s2 slope {rv.slope:.5f} vs s* "
                f"{rv.predicted:.5f} ({rv.rel_err:.2%}); tol 5%")


def _check_segregation(spec, traj):
    seg = segregation_metrics(traj.final(), spec.expected["u_speed"],
                              spec.expected["v_speed"], eps=0.1)
    sups = (seg.sup_u_dev_inner, seg.sup_v_dev_shell, seg.sup_v_inner)
    ok = max(sups) < SEGREGATION_SUP
    return ok, (f"sup|u-1| inner {sups[0]:.2e}, sup|v-1| shell {sups[1]:.2e}, "
                f"sup v inner {sups[2]:.2e}; tol {SEGREGATION_SUP}")


def _check_single_front(spec, traj):
    rep = speed_report(traj.times, traj.s1, spec.expected["u_speed"],
                       species="u")
    final = traj.final()
    u0, v0 = float(final.U[0]), float(final.V[0])
    ok = (rep.rel_err < SPEED_FIT_RTOL and abs(u0 - 1.0) < ENDPOINT_TOL
          and abs(v0) < ENDPOINT_TOL)
    return ok, (f"h slope {rep.slope:.5f} vs c* {rep.predicted:.5f} "
                f"({rep.rel_err:.2%}); (u,v)(0,t_end)=({u0:.4f},{v0:.4f})")


def _check_trichotomy(runs):
    msgs, ok = [], True
    for which in ("i", "ii", "iii"):
        spec, traj = runs[f"region_B_{which}"]
        got = {k: o.status for k, o in classify_outcome(traj).items()}
        want = {k: v for k, v in spec.expected.items() if isinstance(v, str)}
        match = got == want
        ok &= match
        if got["u"] == "spreads" and got["v"] == "spreads":
            ok = False
            msgs.append(f"({which}) both species spread in the c*>s* region")
        msgs.append(f"({which}) got {got} want {want}")
    return ok, "; ".join(msgs)


def _trajectory_hygiene(tag, traj) -> list[str]:
    msgs = []
    if np.any(np.diff(traj.s1) < 0) or np.any(np.diff(traj.s2) < 0):
        msgs.append(f"{tag}: front not monotone")
    for snap in traj.snapshots:
        if np.any(snap.U < 0) or np.any(snap.V < 0):
            msgs.append(f"{tag}: negative density at t={snap.t}")
            break
        if not (np.isfinite(snap.U).all() and np.isfinite(snap.V).all()):
            msgs.append(f"{tag}: non-finite density at t={snap.t}")
            break
    return msgs


def _comparison_runs():
    """Two runs with mixed-ordered initial data (u up, v down)."""
    n = 512
    num = NumericsConfig(n_cells=n, dt=2e-3, t_end=2.0, snapshot_every=200)
    params = replace(DEFAULT_PARAMS, mu2=1.0)
    R = np.linspace(0.0, 1.0, n + 1)
    bump = np.cos(0.5 * np.pi * R) ** 2
    bump[-1] = 0.0
    mk = lambda au, av: InitialData(s1_0=2.0, u0=au * bump,
                                    s2_0=3.0, v0=av * bump)
    hi = run_P(params, mk(0.8, 0.3), num)
    lo = run_P(params, mk(0.4, 0.6), num)
    return hi, lo


def _check_comparison(hi: Trajectory, lo: Trajectory):
    """u-larger/v-smaller data stays above in u and below in v."""
    tol = 1e-9
    if np.any(hi.s1 < lo.s1 - tol) or np.any(hi.s2 > lo.s2 + tol):
        return False, "front ordering violated"
    worst = 0.0
    for sa, sb in zip(hi.snapshots, lo.snapshots):
        radii = np.linspace(0.0, max(sa.s2, sb.s2), 513)
        du = cross_grid_sample(sb.U, sb.s1, radii) - \
            cross_grid_sample(sa.U, sa.s1, radii)
        dv = cross_grid_sample(sa.V, sa.s2, radii) - \
            cross_grid_sample(sb.V, sb.s2, radii)
        worst = max(worst, float(du.max()), float(dv.max()))
    return worst <= tol, f"worst ordering violation {worst:.2e} (tol {tol})"


def _convergence_order():
    params = replace(DEFAULT_PARAMS, mu2=1.0)
    fronts = []
    for n, dt in ((128, 4e-3), (256, 2e-3), (512, 1e-3)):
        R = np.linspace(0.0, 1.0, n + 1)
        bump = np.cos(0.5 * np.pi * R) ** 2
        bump[-1] = 0.0
        init = InitialData(s1_0=2.0, u0=0.6 * bump, s2_0=3.0, v0=0.5 * bump)
        num = NumericsConfig(n_cells=n, dt=dt, t_end=2.0, snapshot_every=10 ** 9)
        traj = run_P(params, init, num)
        fronts.append((traj.s1[-1], traj.s2[-1]))
    orders = []
    for j in range(2):
        e1 = abs(fronts[0][j] - fronts[1][j])
        e2 = abs(fronts[1][j] - fronts[2][j])
        orders.append(math.log2(e1 / e2))
    return orders


def _check_hygiene(runs, hi, lo):
    msgs = []
    for tag, (_, traj) in runs.items():
        msgs.extend(_trajectory_hygiene(tag, traj))
    cmp_ok, cmp_msg = _check_comparison(hi, lo)
    if not cmp_ok:
        msgs.append(f"comparison: {cmp_msg}")
    orders = _convergence_order()
    if min(orders) < CONVERGENCE_ORDER_MIN:
        msgs.append(f"self-convergence orders {orders} below "
                    f"{CONVERGENCE_ORDER_MIN}")
    detail = (f"orders s1={orders[0]:.2f}, s2={orders[1]:.2f}; {cmp_msg}"
              + ("; " + "; ".join(msgs) if msgs else "; all snapshots clean"))
    return not msgs, detail


def full_checks(jobs: int = 1) -> list[CheckResult]:
    results = fast_checks()
    t0 = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(_PDE_PRESETS))) as ex:
            trajs = list(ex.map(run_preset, _PDE_PRESETS))
    else:
        trajs = [run_preset(name) for name in _PDE_PRESETS]
    runs = {name: (get_preset(name), traj)
            for name, traj in zip(_PDE_PRESETS, trajs)}
    elapsed_runs = time.perf_counter() - t0
    a2_spec, a2_traj = runs["weak_strong_A2"]
    q_spec, q_traj = runs["problem_Q"]
    two = _run("two_speed_spreading", _check_two_speed, a2_spec, a2_traj)
    # fold the shared-run cost into the first PDE check for honest totals
    results.append(replace(two, elapsed=two.elapsed + elapsed_runs))
    results.append(_run("segregation", _check_segregation, a2_spec, a2_traj))
    results.append(_run("single_front_invasion", _check_single_front,
                        q_spec, q_traj))
    results.append(_run("trichotomy", _check_trichotomy, runs))
    hi, lo = _comparison_runs()
    results.append(_run("numerical_hygiene", _check_hygiene, runs, hi, lo))
    return results


def run_checks(level: str, jobs: int = 1) -> list[CheckResult]:
    if level == "fast":
        return fast_checks()
    if level == "full":
        return full_checks(jobs=jobs)
    raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
