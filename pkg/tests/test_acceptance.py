"""Acceptance gate: one test per criterion, one printed pass/fail line each.

The expensive PDE trajectories are produced once per session (in parallel)
and shared by the criteria that consume them.  Every criterion delegates to
the same check functions the `verify` subcommand runs, so a green gate here
matches `fbcomp verify --level full` exactly.
"""

import math
from concurrent.futures import ProcessPoolExecutor

import pytest

from fbcomp import verify
from fbcomp.runner import run_preset
from fbcomp.scenarios import get_preset


@pytest.fixture(scope="session")
def pde_runs():
    """All acceptance trajectories, computed once and shared."""
    with ProcessPoolExecutor(max_workers=4) as ex:
        trajs = list(ex.map(run_preset, verify._PDE_PRESETS))
    return {name: (get_preset(name), traj)
            for name, traj in zip(verify._PDE_PRESETS, trajs)}


def announce(capsys, label, passed, detail):
    with capsys.disabled():
        status = "pass" if passed else "FAIL"
        print(f"\n[{status}] {label}: {detail}")
    assert passed, detail


def test_criterion_01_critical_radius(capsys):
    passed, detail = verify._check_critical_radius()
    announce(capsys, "criterion 1 (critical radius exactness)", passed, detail)


def test_criterion_02_scalar_first_integral_anchor(capsys):
    passed, detail = verify._check_scalar_anchor()
    announce(capsys, "criterion 2 (scalar semi-wave anchor, 5 random triples,"
             " rel tol 1e-4)", passed, detail)


def test_criterion_03_scaling_identity_and_asymptote(capsys):
    passed, detail = verify._check_scaling_identity()
    announce(capsys, "criterion 3 (s* scaling identity 1e-6, small-mu"
             " asymptote 5%)", passed, detail)


def test_criterion_04_decoupling_and_bounds(capsys):
    passed, detail = verify._check_decoupling_and_bounds()
    announce(capsys, "criterion 4 (k->0 decoupling 1e-6, speed bounds)",
             passed, detail)


def test_criterion_05_monotonicity_ladders(capsys):
    passed, detail = verify._check_monotonicity_ladders()
    announce(capsys, "criterion 5 (c*, s* strictly increasing in mu)",
             passed, detail)


def test_criterion_06_two_speed_spreading(capsys, pde_runs):
    spec, traj = pde_runs["weak_strong_A2"]
    passed, detail = verify._check_two_speed(spec, traj)
    # supplementary difference quotient: the outer front's average speed over
    # the trailing half must not exceed its limit constant by more than 5%
    t = traj.times
    mid = len(t) // 2
    quot = (traj.s2[-1] - traj.s2[mid]) / (t[-1] - t[mid])
    s_star = spec.expected["v_speed"]
    if quot > 1.05 * s_star:
        passed = False
        detail += f"; difference quotient {quot:.5f} > 1.05*s*"
    announce(capsys, "criterion 6 (two-speed spreading, slopes within 5%)",
             passed, detail)


def test_criterion_07_segregation(capsys, pde_runs):
    spec, traj = pde_runs["weak_strong_A2"]
    passed, detail = verify._check_segregation(spec, traj)
    announce(capsys, "criterion 7 (segregation sups < 0.05 at eps=0.1)",
             passed, detail)


def test_criterion_08_single_front_invasion(capsys, pde_runs):
    spec, traj = pde_runs["problem_Q"]
    passed, detail = verify._check_single_front(spec, traj)
    announce(capsys, "criterion 8 (resident-background invasion: h/t within"
             " 5% of c*, endpoint within 0.05 of (1,0))", passed, detail)


def test_criterion_09_trichotomy(capsys, pde_runs):
    passed, detail = verify._check_trichotomy(pde_runs)
    announce(capsys, "criterion 9 (vanishing/spreading trichotomy, never"
             " both spread)", passed, detail)


def test_criterion_10_numerical_hygiene(capsys, pde_runs):
    hi, lo = verify._comparison_runs()
    passed, detail = verify._check_hygiene(pde_runs, hi, lo)
    announce(capsys, "criterion 10 (convergence order >= 0.8, positivity,"
             " monotone fronts, ordering preserved)", passed, detail)
