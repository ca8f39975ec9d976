"""Command-line client for the service: constants, simulate, sweep, verify.

By default the CLI mounts the FastAPI app in-process (no network); pass
--server URL to talk to a remote instance instead.  Exit code is 0 only
when the requested command, including every requested check, succeeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from .config import RunConfig
from .errors import FbcompError

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fbcomp",
        description="Spreading-speed constants and free-boundary "
                    "competition simulations")
    parser.add_argument("--server", default=None, metavar="URL",
                        help="base URL of a running service "
                             "(default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, metavar="PATH",
                        help="INI run configuration")
    common.add_argument("--preset", default=None, metavar="NAME",
                        help="named scenario preset")
    common.add_argument("--out", default=None, metavar="DIR",
                        help="output directory")

    sub.add_parser("constants", parents=[common],
                   help="compute c*, s*, R*, thresholds, and the regime")

    sub.add_parser("simulate", parents=[common],
                   help="run a scenario and emit CSV/JSON artifacts")

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="compute constants over a parameter ladder")
    p_sweep.add_argument("--vary", choices=("mu1", "mu2"), default="mu2")
    p_sweep.add_argument("--values", default="0.1,0.5,1,5,20",
                         help="comma-separated ladder values")
    p_sweep.add_argument("--jobs", type=int, default=1, metavar="K")

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run the acceptance checks")
    p_verify.add_argument("--level", choices=("fast", "full"), default="fast")
    p_verify.add_argument("--jobs", type=int, default=1, metavar="K")

    return parser


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app
    return TestClient(app, base_url="http://fbcomp.local")


def _load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.preset:
        cfg = cfg.with_(preset=args.preset)
    if args.out:
        cfg = cfg.with_(out_dir=args.out)
    return cfg


def _post(client, path, payload) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise FbcompError(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _params_payload(cfg: RunConfig) -> dict:
    if cfg.params is not None:
        p = cfg.params
    else:
        # fall back to the preset's own parameters
        from .scenarios import get_preset
        p = get_preset(cfg.preset).params
    return {"d": p.d, "r": p.r, "h": p.h, "k": p.k,
            "mu1": p.mu1, "mu2": p.mu2, "N": p.N}


def _emit(out_dir: str | None, name: str, text: str) -> None:
    if out_dir is None:
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text, encoding="utf-8")


def cmd_constants(args, client) -> int:
    cfg = _load_config(args)
    payload = _params_payload(cfg)
    report = _post(client, "/constants", {"params": payload})
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    _emit(args.out, "constants.json", text)
    return 0


def cmd_simulate(args, client) -> int:
    cfg = _load_config(args)
    payload: dict = {"preset": cfg.preset,
                     "include_snapshots": cfg.emit_snapshots}
    if cfg.params is not None:
        p = cfg.params
        payload["params"] = {"d": p.d, "r": p.r, "h": p.h, "k": p.k,
                             "mu1": p.mu1, "mu2": p.mu2, "N": p.N}
    if cfg.numerics is not None:
        n = cfg.numerics
        payload["numerics"] = {"n_cells": n.n_cells, "dt": n.dt,
                               "scheme": n.scheme,
                               "snapshot_every": n.snapshot_every,
                               "t_end": n.t_end}
    body = _post(client, "/simulate", payload)
    out = args.out or cfg.out_dir
    if cfg.emit_fronts:
        _emit(out, "fronts.csv", body["fronts_csv"])
    if cfg.emit_snapshots:
        for snap in body["snapshots"]:
            _emit(out, snap["name"], snap["csv"])
    if cfg.emit_reports:
        _emit(out, "reports.json",
              json.dumps(body["reports"], sort_keys=True, indent=2) + "\n")
    speeds = body["reports"]["speeds"]
    for species, rep in sorted(speeds.items()):
        line = f"{species}: slope {rep['slope']:.6f}"
        if rep.get("rel_err") is not None:
            line += (f" vs predicted {rep['predicted']:.6f} "
                     f"(rel err {rep['rel_err']:.2%})")
        print(line)
    for species, o in sorted(body["reports"]["outcomes"].items()):
        print(f"{species}: {o['status']} (front {o['final_front']:.4f})")
    return 0


def cmd_sweep(args, client) -> int:
    cfg = _load_config(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    payload = {"vary": args.vary, "values": values, "jobs": args.jobs,
               "params": _params_payload(cfg)}
    body = _post(client, "/sweep", payload)
    sys.stdout.write(body["csv"])
    _emit(args.out, "sweep.csv", body["csv"])
    return 0


def cmd_verify(args, client) -> int:
    body = _post(client, "/verify", {"level": args.level, "jobs": args.jobs})
    width = max(len(r["name"]) for r in body["results"])
    for r in body["results"]:
        status = "PASS" if r["passed"] else "FAIL"
        print(f"{status}  {r['name']:<{width}}  {r['elapsed']:8.2f}s  "
              f"{r['detail']}")
    if args.out:
        _emit(args.out, "verify.json",
              json.dumps(body, sort_keys=True, indent=2) + "\n")
    print("all passed" if body["all_passed"] else "FAILURES present")
    return 0 if body["all_passed"] else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"constants": cmd_constants, "simulate": cmd_simulate,
               "sweep": cmd_sweep, "verify": cmd_verify}[args.command]
    try:
        with _client(args.server) as client:
            return handler(args, client)
    except FbcompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
