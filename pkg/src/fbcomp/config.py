"""INI-style run configuration with lossless round-trip.

Sections: [scenario] (preset name), [params] (model parameter overrides),
[numerics] (time-stepping overrides), [output] (directory and emit flags).
Every section is optional; unknown sections or keys are rejected so typos
fail loudly instead of silently using defaults.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, fields, replace

from .errors import InvalidSpec
from .model import ModelParams, NumericsConfig

__all__ = ["RunConfig"]

_PARAM_KEYS = ("d", "r", "h", "k", "mu1", "mu2", "N")
_NUMERICS_KEYS = ("n_cells", "dt", "scheme", "snapshot_every", "t_end")
_OUTPUT_KEYS = ("dir", "fronts", "snapshots", "reports")
_SCENARIO_KEYS = ("preset",)
_SECTIONS = {"scenario": _SCENARIO_KEYS, "params": _PARAM_KEYS,
             "numerics": _NUMERICS_KEYS, "output": _OUTPUT_KEYS}

_BOOL = {"true": True, "false": False}


@dataclass(frozen=True)
class RunConfig:
    """What to run and what to emit.

    params/numerics are None when the preset's own choices should be used;
    when set they replace the preset values wholesale.
    """

    preset: str = "weak_strong_A2"
    params: ModelParams | None = None
    numerics: NumericsConfig | None = None
    out_dir: str = "out"
    emit_fronts: bool = True
    emit_snapshots: bool = True
    emit_reports: bool = True

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    @classmethod
    def from_ini(cls, text: str) -> "RunConfig":
        cp = configparser.ConfigParser(interpolation=None)
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise InvalidSpec(f"malformed config: {exc}") from exc
        for section in cp.sections():
            if section not in _SECTIONS:
                raise InvalidSpec(f"unknown config section [{section}]")
            for key in cp[section]:
                if key.lower() not in tuple(k.lower() for k in _SECTIONS[section]):
                    raise InvalidSpec(f"unknown key {key!r} in [{section}]")
        cfg = cls()
        if cp.has_option("scenario", "preset"):
            cfg = cfg.with_(preset=cp["scenario"]["preset"].strip())
        if cp.has_section("params") and cp["params"]:
            got = dict(cp["params"])
            missing = [k for k in _PARAM_KEYS if k.lower() not in got]
            if missing:
                raise InvalidSpec(f"[params] must give all of {_PARAM_KEYS}, "
                                  f"missing {missing}")
            cfg = cfg.with_(params=ModelParams(
                d=float(got["d"]), r=float(got["r"]), h=float(got["h"]),
                k=float(got["k"]), mu1=float(got["mu1"]),
                mu2=float(got["mu2"]), N=int(got["n"])).validate())
        if cp.has_section("numerics") and cp["numerics"]:
            base = NumericsConfig()
            kw = {}
            for f in fields(NumericsConfig):
                if cp.has_option("numerics", f.name):
                    raw = cp["numerics"][f.name]
                    kw[f.name] = raw if f.type == "str" else (
                        int(raw) if f.name in ("n_cells", "snapshot_every")
                        else float(raw))
            cfg = cfg.with_(numerics=base.with_(**kw).validate())
        if cp.has_section("output"):
            out = cp["output"]
            if "dir" in out:
                cfg = cfg.with_(out_dir=out["dir"].strip())
            for key, attr in (("fronts", "emit_fronts"),
                              ("snapshots", "emit_snapshots"),
                              ("reports", "emit_reports")):
                if key in out:
                    raw = out[key].strip().lower()
                    if raw not in _BOOL:
                        raise InvalidSpec(f"[output] {key} must be true/false")
                    cfg = cfg.with_(**{attr: _BOOL[raw]})
        return cfg

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp["scenario"] = {"preset": self.preset}
        if self.params is not None:
            p = self.params
            cp["params"] = {"d": repr(p.d), "r": repr(p.r), "h": repr(p.h),
                            "k": repr(p.k), "mu1": repr(p.mu1),
                            "mu2": repr(p.mu2), "N": str(p.N)}
        if self.numerics is not None:
            n = self.numerics
            cp["numerics"] = {"n_cells": str(n.n_cells), "dt": repr(n.dt),
                              "scheme": n.scheme,
                              "snapshot_every": str(n.snapshot_every),
                              "t_end": repr(n.t_end)}
        cp["output"] = {"dir": self.out_dir,
                        "fronts": str(self.emit_fronts).lower(),
                        "snapshots": str(self.emit_snapshots).lower(),
                        "reports": str(self.emit_reports).lower()}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_ini(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_ini())
