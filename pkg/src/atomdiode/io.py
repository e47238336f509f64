"""Output formats: timeseries.csv, sweep.csv, density snapshots, manifest.

All text output uses '.' as decimal separator and %.17g floats (shortest
round-trip within IEEE double), so identical runs give byte-identical
files on any platform with the same numerics.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import struct
import time

import numpy as np

from .errors import ValidationError

SNAPSHOT_MAGIC = b"ADS1"
N_COMPONENTS = 6

TIMESERIES_COLUMNS = ("t_ms", "p1", "p2", "p3", "xbar_um", "v_um_per_ms",
                      "v_fd_um_per_ms", "photon", "dark_pop", "norm",
                      "se_p1", "se_p3")
SWEEP_COLUMNS = ("value", "T", "final_p1", "final_p3", "jumps_mean")

SNAPSHOT_CSV_COLUMNS = ("x_um", "rho_1_0", "rho_1_1", "rho_2_0", "rho_2_1",
                        "rho_3_0", "rho_3_1")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_timeseries(path: str, ens) -> None:
    """Write an EnsembleResult's time series with the fixed column schema."""
    m, se = ens.mean, ens.stderr
    cols = [ens.time_grid, m["p1"], m["p2"], m["p3"], m["xbar"], m["v"],
            ens.v_fd, m["photon"], m["dark_pop"], m["norm"],
            se["p1"], se["p3"]]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(TIMESERIES_COLUMNS) + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_timeseries(path: str) -> dict:
    """Columns as float arrays, keyed by header name; schema enforced."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != TIMESERIES_COLUMNS:
            raise ValidationError("timeseries", f"bad header {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        return {name: np.empty(0) for name in TIMESERIES_COLUMNS}
    return {name: data[:, j] for j, name in enumerate(TIMESERIES_COLUMNS)}


def write_sweep(path: str, rows) -> None:
    """rows: iterable of (value, T, final_p1, final_p3, jumps_mean)."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_sweep(path: str) -> dict:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != SWEEP_COLUMNS:
            raise ValidationError("sweep", f"bad header {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {name: data[:, j] for j, name in enumerate(SWEEP_COLUMNS)}


def write_snapshot(path: str, densities: np.ndarray, dx: float, x_min: float,
                   t_ms: float) -> None:
    """Binary snapshot: magic, u32 n_points, u32 6, f64 dx, f64 x_min,
    f64 t_ms, then the (6, n) densities row-major; little-endian."""
    densities = np.asarray(densities, dtype=np.float64)
    if densities.ndim != 2 or densities.shape[0] != N_COMPONENTS:
        raise ValidationError("densities", f"expected (6, n), got {densities.shape}")
    n = densities.shape[1]
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(struct.pack("<IIddd", n, N_COMPONENTS, dx, x_min, t_ms))
        fh.write(np.ascontiguousarray(densities).astype("<f8").tobytes())


def read_snapshot(path: str):
    """Returns (densities (6, n), dx, x_min, t_ms)."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != SNAPSHOT_MAGIC:
            raise ValidationError("snapshot", f"bad magic {magic!r} in {path}")
        n, nc, dx, x_min, t_ms = struct.unpack("<IIddd", fh.read(32))
        if nc != N_COMPONENTS:
            raise ValidationError("snapshot", f"expected 6 components, got {nc}")
        data = np.frombuffer(fh.read(8 * n * nc), dtype="<f8")
    if data.size != n * nc:
        raise ValidationError("snapshot", f"truncated file {path}")
    return data.reshape(nc, n).copy(), dx, x_min, t_ms


def write_snapshot_csv(path: str, densities: np.ndarray, x: np.ndarray,
                       t_ms: float) -> None:
    """CSV alternative to the binary snapshot (t_ms recorded in a comment)."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# t_ms={_fmt(t_ms)}\n")
        fh.write(",".join(SNAPSHOT_CSV_COLUMNS) + "\n")
        for j in range(len(x)):
            fh.write(",".join([_fmt(x[j])]
                              + [_fmt(densities[c, j]) for c in range(6)]) + "\n")


def sha256_of(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(cfg, resolved, ens, wall_seconds: float,
                   output_files: dict, extra: dict | None = None) -> dict:
    """Everything needed to bit-reproduce the run plus integrity checksums."""
    from . import __version__
    from .config import config_to_dict

    plan = resolved.plan
    manifest = {
        "version": __version__,
        "config": config_to_dict(cfg),
        "physical_params": dataclasses.asdict(resolved.physical),
        "derived_params": dataclasses.asdict(resolved.derived),
        "model_options": dataclasses.asdict(resolved.options),
        "grid": {"x_min": resolved.grid.x_min, "x_max": resolved.grid.x_max,
                 "n_points": resolved.grid.n_points, "dx": resolved.grid.dx},
        "time": {"dt": plan.dt, "n_steps": plan.n_steps,
                 "t_final": plan.t_final,
                 "sample_every_steps": resolved.sample_every_steps},
        "ensemble": {"n_traj": ens.n_traj, "base_seed": cfg.base_seed,
                     "traj_seeds": [int(s) for s in ens.traj_seeds],
                     "jump_counts": [int(c) for c in ens.jump_counts],
                     "total_jumps": int(sum(ens.jump_counts))},
        "results": {"transmission": float(ens.transmission),
                    "final_p1": float(ens.mean["p1"][-1]),
                    "final_p3": float(ens.mean["p3"][-1])},
        "wall_seconds": wall_seconds,
        "files": {name: {"path": p, "sha256": sha256_of(p)}
                  for name, p in output_files.items()},
    }
    if extra:
        manifest.update(extra)
    return manifest


def write_manifest(path: str, manifest: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_run_outputs(cfg, resolved, ens, out_dir: str,
                      wall_seconds: float, extra: dict | None = None) -> dict:
    """Write timeseries.csv (+ optional snapshots) and manifest.json.

    Returns the manifest dict; manifest.json is always written last so a
    complete manifest implies complete outputs.
    """
    os.makedirs(out_dir, exist_ok=True)
    files = {}
    ts_path = os.path.join(out_dir, "timeseries.csv")
    write_timeseries(ts_path, ens)
    files["timeseries"] = ts_path
    if cfg.emit_densities and ens.snapshot_densities is not None:
        g = ens.grid
        for idx, t in enumerate(ens.snapshot_times):
            dens = ens.snapshot_densities[idx]
            if cfg.density_format == "csv":
                p = os.path.join(out_dir, f"snapshot_{idx:04d}.csv")
                write_snapshot_csv(p, dens, g.x, t)
            else:
                p = os.path.join(out_dir, f"snapshot_{idx:04d}.bin")
                write_snapshot(p, dens, g.dx, g.x_min, t)
            files[f"snapshot_{idx:04d}"] = p
    manifest = build_manifest(cfg, resolved, ens, wall_seconds, files, extra)
    write_manifest(os.path.join(out_dir, "manifest.json"), manifest)
    return manifest


def run_is_complete(out_dir: str, cfg) -> bool:
    """True when out_dir holds a manifest for exactly this config whose
    recorded outputs still match their checksums (used for resume)."""
    from .config import config_to_dict

    path = os.path.join(out_dir, "manifest.json")
    if not os.path.exists(path):
        return False
    try:
        with open(path) as fh:
            manifest = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return False
    if manifest.get("config") != config_to_dict(cfg):
        return False
    for entry in manifest.get("files", {}).values():
        if not os.path.exists(entry["path"]) \
                or sha256_of(entry["path"]) != entry["sha256"]:
            return False
    return True


class WallClock:
    """Context manager reporting elapsed wall seconds."""

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.monotonic() - self.start
        return False
