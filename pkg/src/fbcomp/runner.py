"""Orchestration: materialize a scenario, run it, assemble and emit reports."""

from __future__ import annotations

import json
import math
from dataclasses import replace
from pathlib import Path

from .config import RunConfig
from .diagnostics import (classify_outcome, fit_front_speed, speed_report,
                          trichotomy_thresholds)
from .errors import EmptyBand
from .model import ModelParams
from .scenarios import ScenarioSpec, get_preset, validate_regime
from .semiwave import compute_R_star
from .simulate import Trajectory, run_P, run_Q

__all__ = ["materialize", "run_scenario", "run_preset", "build_reports",
           "constants_report", "emit_outputs", "execute"]


def constants_report(params: ModelParams) -> dict:
    """All speed constants and thresholds for one parameter point."""
    regime = validate_regime(params)
    thr = (trichotomy_thresholds(params).to_dict()
           if params.weak_strong else None)
    out = regime.to_dict()
    out["R_star"] = compute_R_star(params.N)
    out["thresholds"] = thr
    out["params"] = {"d": params.d, "r": params.r, "h": params.h,
                     "k": params.k, "mu1": params.mu1, "mu2": params.mu2,
                     "N": params.N}
    return out


def materialize(config: RunConfig) -> ScenarioSpec:
    """Resolve a config into a concrete scenario.

    Overrides replace the preset's choices wholesale; the initial-data
    arrays always come from the preset recipe, so a params override changes
    the dynamics but not the starting profiles.
    """
    spec = get_preset(config.preset)
    kw = {}
    if config.params is not None:
        kw["params"] = config.params.validate()
        kw["margin"] = None  # stale for overridden params
    if config.numerics is not None:
        kw["numerics"] = config.numerics.validate()
    return replace(spec, **kw) if kw else spec


def run_scenario(spec: ScenarioSpec) -> Trajectory:
    if spec.mode == "Q":
        return run_Q(spec.params, spec.init, spec.v_background,
                     spec.L_domain, spec.numerics)
    return run_P(spec.params, spec.init, spec.numerics)


def run_preset(name: str) -> Trajectory:
    """Run a named preset; top-level so it can cross process boundaries."""
    return run_scenario(get_preset(name))


def build_reports(spec: ScenarioSpec, traj: Trajectory) -> dict:
    """Speed fits, outcome labels, and (when applicable) segregation metrics."""
    from .diagnostics import segregation_metrics

    reports: dict = {"tag": spec.tag, "mode": spec.mode}
    speeds = {}
    pred_u = spec.expected.get("u_speed")
    speeds["u"] = (speed_report(traj.times, traj.s1, pred_u, species="u")
                   if pred_u else
                   fit_front_speed(traj.times, traj.s1, species="u")).to_dict()
    if spec.mode == "P":
        pred_v = spec.expected.get("v_speed")
        speeds["v"] = (speed_report(traj.times, traj.s2, pred_v, species="v")
                       if pred_v else
                       fit_front_speed(traj.times, traj.s2,
                                       species="v")).to_dict()
    reports["speeds"] = speeds
    reports["outcomes"] = {k: o.to_dict()
                           for k, o in classify_outcome(traj).items()}
    if spec.mode == "P" and pred_u and spec.expected.get("v_speed"):
        try:
            seg = segregation_metrics(traj.final(), pred_u,
                                      spec.expected["v_speed"])
            reports["segregation"] = seg.to_dict()
        except EmptyBand:
            reports["segregation"] = None
    reports["expected"] = {k: v for k, v in spec.expected.items()
                           if isinstance(v, str)}
    reports["constants"] = constants_report(spec.params)
    return reports


def _snapshot_name(index: int, t: float) -> str:
    return f"snapshot_{index:03d}_t{t:.6f}.csv"


def emit_outputs(config: RunConfig, spec: ScenarioSpec, traj: Trajectory,
                 reports: dict) -> list[str]:
    """Write the configured artifacts under out_dir; returns written paths."""
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if config.emit_fronts:
        path = out / "fronts.csv"
        path.write_text(traj.front_csv(), encoding="utf-8")
        written.append(str(path))
    if config.emit_snapshots:
        for i, snap in enumerate(traj.snapshots):
            path = out / _snapshot_name(i, snap.t)
            path.write_text(traj.snapshot_csv(snap), encoding="utf-8")
            written.append(str(path))
    if config.emit_reports:
        path = out / "reports.json"
        path.write_text(json.dumps(reports, sort_keys=True, indent=2,
                                   allow_nan=False) + "\n", encoding="utf-8")
        written.append(str(path))
    return written


def execute(config: RunConfig):
    """materialize -> run -> report -> emit; returns (spec, traj, reports)."""
    spec = materialize(config)
    traj = run_scenario(spec)
    reports = build_reports(spec, traj)
    if not all(map(math.isfinite, (traj.s1[-1], traj.s2[-1]))):
        raise AssertionError("non-finite front at end of run")
    emit_outputs(config, spec, traj, reports)
    return spec, traj, reports
