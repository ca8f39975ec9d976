"""HTTP service exposing constants, simulation, sweeps, and verification.

The FastAPI app wraps the core package; the CLI mounts it in-process by
default, and the same app can be served standalone with uvicorn.  All
responses are plain JSON built from the report dictionaries, with CSV
artifacts embedded as strings so clients can write byte-identical files.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .config import RunConfig
from .errors import FbcompError
from .model import ModelParams, NumericsConfig
from .runner import build_reports, constants_report, materialize, run_scenario
from .scenarios import PRESET_NAMES
from .verify import run_checks

__all__ = ["app", "create_app"]


class ParamsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d: float = 1.0
    r: float = 1.0
    h: float = 2.0
    k: float = 0.5
    mu1: float = 1.0
    mu2: float = 2.0
    N: int = 1

    def to_core(self) -> ModelParams:
        return ModelParams(d=self.d, r=self.r, h=self.h, k=self.k,
                           mu1=self.mu1, mu2=self.mu2, N=self.N).validate()


class NumericsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_cells: int | None = None
    dt: float | None = None
    scheme: str | None = None
    snapshot_every: int | None = None
    t_end: float | None = None

    def to_core(self, base: NumericsConfig) -> NumericsConfig:
        kw = {k: v for k, v in self.model_dump().items() if v is not None}
        return base.with_(**kw).validate()


class ConstantsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsModel = Field(default_factory=ParamsModel)


class SimulateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    preset: str = "weak_strong_A2"
    params: ParamsModel | None = None
    numerics: NumericsModel | None = None
    include_snapshots: bool = True


class SnapshotFile(BaseModel):
    name: str
    csv: str


class SimulateResponse(BaseModel):
    tag: str
    mode: str
    fronts_csv: str
    snapshots: list[SnapshotFile]
    reports: dict


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vary: Literal["mu1", "mu2"] = "mu2"
    values: list[float] = Field(default_factory=lambda: [0.1, 0.5, 1.0, 5.0, 20.0])
    params: ParamsModel = Field(default_factory=ParamsModel)
    jobs: int = 1


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    level: Literal["fast", "full"] = "fast"
    jobs: int = 1


def _http_guard(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except FbcompError as exc:
        raise HTTPException(status_code=422,
                            detail=f"{type(exc).__name__}: {exc}")


def create_app() -> FastAPI:
    app = FastAPI(title="fbcomp", version=__version__,
                  description="Two-species free-boundary competition lab")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/presets")
    def presets() -> dict:
        return {"presets": list(PRESET_NAMES)}

    @app.post("/constants")
    def constants(req: ConstantsRequest) -> dict:
        def go():
            params = req.params.to_core()
            params.require_weak_strong()
            return constants_report(params)
        return _http_guard(go)

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        def go():
            cfg = RunConfig(preset=req.preset)
            if req.params is not None:
                cfg = cfg.with_(params=req.params.to_core())
            spec = materialize(cfg)
            if req.numerics is not None:
                spec = replace(spec,
                               numerics=req.numerics.to_core(spec.numerics))
            traj = run_scenario(spec)
            reports = build_reports(spec, traj)
            snaps = []
            if req.include_snapshots:
                for i, snap in enumerate(traj.snapshots):
                    snaps.append(SnapshotFile(
                        name=f"snapshot_{i:03d}_t{snap.t:.6f}.csv",
                        csv=traj.snapshot_csv(snap)))
            return SimulateResponse(tag=spec.tag, mode=spec.mode,
                                    fronts_csv=traj.front_csv(),
                                    snapshots=snaps, reports=reports)
        return _http_guard(go)

    @app.post("/sweep")
    def sweep(req: SweepRequest) -> dict:
        def go():
            base = req.params.to_core()
            base.require_weak_strong()
            points = [replace(base, **{req.vary: v}).validate()
                      for v in req.values]
            if req.jobs > 1:
                with ProcessPoolExecutor(max_workers=req.jobs) as ex:
                    reps = list(ex.map(constants_report, points))
            else:
                reps = [constants_report(p) for p in points]
            rows = [{req.vary: v, "c_star": rep["c_star"],
                     "s_star": rep["s_star"], "margin": rep["margin"],
                     "regime": rep["regime"]}
                    for v, rep in zip(req.values, reps)]
            header = f"{req.vary},c_star,s_star,margin,regime\n"
            lines = ["%.17g,%.17g,%.17g,%.17g,%s" % (
                row[req.vary], row["c_star"], row["s_star"], row["margin"],
                row["regime"]) for row in rows]
            return {"vary": req.vary, "rows": rows,
                    "csv": header + "\n".join(lines) + "\n"}
        return _http_guard(go)

    @app.post("/verify")
    def verify(req: VerifyRequest) -> dict:
        results = run_checks(req.level, jobs=req.jobs)
        return {"level": req.level,
                "all_passed": all(r.passed for r in results),
                "results": [r.to_dict() for r in results]}

    return app


app = create_app()
