"""Command-line surface: `ads run`, `ads sweep`, `ads verify`.

Exit codes: 0 success, 1 verify failures, 2 config validation errors,
3 grid/Nyquist/domain errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .config import (PRESETS, SCENARIOS, RunConfig, config_from_dict,
                     config_to_dict, resolve)
from .errors import DomainTooSmall, NyquistViolation, ValidationError
from .io import WallClock, run_is_complete, write_run_outputs, write_sweep
from .mcwf import run_ensemble

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_GRID = 3


def _load_config(args) -> RunConfig:
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = config_from_dict(json.load(fh))
        except (ValidationError, json.JSONDecodeError, OSError) as exc:
            print(f"error: config: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_CONFIG) from exc
    else:
        cfg = RunConfig()
    overrides = {}
    for name in ("scenario", "preset", "n_traj", "workers", "output_dir",
                 "t_final", "dt", "n_snapshots"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    if getattr(args, "seed", None) is not None:
        overrides["base_seed"] = args.seed
    if getattr(args, "emit_densities", False):
        overrides["emit_densities"] = True
    return dataclasses.replace(cfg, **overrides)


def _resolve_or_exit(cfg: RunConfig):
    try:
        return resolve(cfg)
    except ValidationError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG) from exc
    except (NyquistViolation, DomainTooSmall) as exc:
        print(f"error: grid: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_GRID) from exc


def cmd_run(args) -> int:
    cfg = _load_config(args)
    resolved = _resolve_or_exit(cfg)
    out_dir = cfg.output_dir
    if args.resume and run_is_complete(out_dir, cfg):
        print(f"{out_dir}: complete manifest for this config found, skipping")
        return EXIT_OK
    plan = resolved.plan
    print(f"run: scenario={cfg.scenario} preset={cfg.preset} "
          f"n={resolved.grid.n_points} dt={plan.dt:g} ms "
          f"steps={plan.n_steps} trajectories={cfg.n_traj} "
          f"workers={cfg.workers}")
    with WallClock() as clock:
        ens = run_ensemble(cfg)
    manifest = write_run_outputs(cfg, resolved, ens, out_dir, clock.elapsed)
    res = manifest["results"]
    print(f"done in {clock.elapsed:.1f} s: T={res['transmission']:.6g} "
          f"final_p1={res['final_p1']:.6g} final_p3={res['final_p3']:.6g} "
          f"total_jumps={manifest['ensemble']['total_jumps']}")
    print(f"wrote {out_dir}/timeseries.csv and {out_dir}/manifest.json")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        print(f"error: config: --values must be comma-separated numbers: {exc}",
              file=sys.stderr)
        return EXIT_CONFIG
    if not values:
        print("error: config: --values is empty", file=sys.stderr)
        return EXIT_CONFIG
    base = _resolve_or_exit(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    rows = []
    failures = []
    for value in values:
        params = dataclasses.asdict(base.physical)
        params[args.param] = value
        # shared base_seed across sweep points: curves differ only through
        # the parameter, not through resampled noise
        # params carry level/direction already; keep the preset so the
        # scenario-appropriate grid defaults still apply
        point = dataclasses.replace(cfg, params=params, scenario="custom")
        try:
            ens = run_ensemble(point)
        except Exception as exc:  # record and continue, per-point isolation
            failures.append((value, str(exc)))
            print(f"  {args.param}={value:g}: FAILED ({exc})", file=sys.stderr)
            continue
        row = (value, ens.transmission, float(ens.mean["p1"][-1]),
               float(ens.mean["p3"][-1]), float(ens.jump_counts.mean()))
        rows.append(row)
        print(f"  {args.param}={value:g}: T={row[1]:.6g} "
              f"final_p1={row[2]:.6g} final_p3={row[3]:.6g} "
              f"jumps_mean={row[4]:.3g}")
    sweep_path = os.path.join(cfg.output_dir, "sweep.csv")
    write_sweep(sweep_path, rows)
    manifest = {
        "sweep_param": args.param,
        "values": values,
        "base_seed_policy": "shared base_seed across all sweep points",
        "base_seed": cfg.base_seed,
        "config": config_to_dict(cfg),
        "failures": [{"value": v, "error": e} for v, e in failures],
    }
    with open(os.path.join(cfg.output_dir, "sweep_manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {sweep_path} ({len(rows)} points, {len(failures)} failed)")
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_verify(args) -> int:
    from .verify import run_suite

    def progress(name, ok, detail):
        print(f"{'PASS' if ok else 'FAIL'}  {name:30s} {detail}")

    results = run_suite(args.suite, progress=progress)
    n_fail = sum(1 for _, ok, _ in results if not ok)
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    return EXIT_OK if n_fail == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ads", description="cavity atom-diode trajectory simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON run configuration file")
        p.add_argument("--scenario", choices=SCENARIOS)
        p.add_argument("--preset", choices=PRESETS)
        p.add_argument("--seed", type=int, help="ensemble base seed")
        p.add_argument("--n-traj", dest="n_traj", type=int)
        p.add_argument("--workers", type=int,
                       help="trajectory worker processes (ADS_WORKERS fallback)")
        p.add_argument("--out", dest="output_dir", help="output directory")
        p.add_argument("--t-final", dest="t_final", type=float)
        p.add_argument("--dt", type=float)

    p_run = sub.add_parser("run", help="run one ensemble, write outputs")
    common(p_run)
    p_run.add_argument("--emit-densities", action="store_true")
    p_run.add_argument("--n-snapshots", dest="n_snapshots", type=int)
    p_run.add_argument("--resume", action="store_true",
                       help="skip when a matching complete manifest exists")
    p_run.set_defaults(fn=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run one ensemble per value")
    common(p_sweep)
    p_sweep.add_argument("--param", required=True, choices=("v0", "n_atoms"))
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated SI values")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the self-check battery")
    p_verify.add_argument("--suite", choices=("fast", "full"), default="fast")
    p_verify.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
