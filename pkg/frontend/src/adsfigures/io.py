"""Readers for the simulator's output file formats.

Deliberately self-contained: the figure tool talks to the simulator
only through its files (timeseries.csv and the ADS1 density snapshot
binaries), so the formats are re-implemented here from their schemas.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SNAPSHOT_MAGIC = b"ADS1"
N_COMPONENTS = 6

TIMESERIES_COLUMNS = ("t_ms", "p1", "p2", "p3", "xbar_um", "v_um_per_ms",
                      "v_fd_um_per_ms", "photon", "dark_pop", "norm",
                      "se_p1", "se_p3")


class SchemaError(ValueError):
    """Input file does not conform to the expected schema."""


def read_timeseries(path) -> dict:
    """Timeseries columns as float arrays keyed by name.

    The full fixed header is required; a missing or renamed column is a
    hard error. An empty table (header only) is also an error -- there
    is nothing to plot.
    """
    with open(path) as fh:
        header = tuple(fh.readline().strip().split(","))
        if header != TIMESERIES_COLUMNS:
            missing = set(TIMESERIES_COLUMNS) - set(header)
            raise SchemaError(
                f"{path}: bad timeseries header; missing columns "
                f"{sorted(missing)}" if missing
                else f"{path}: bad timeseries header {header}")
        body = fh.read()
    if not body.strip():
        raise SchemaError(f"{path}: timeseries has no data rows")
    data = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2)
    if data.shape[1] != len(TIMESERIES_COLUMNS):
        raise SchemaError(f"{path}: expected {len(TIMESERIES_COLUMNS)} "
                          f"columns, got {data.shape[1]}")
    return {name: data[:, j] for j, name in enumerate(TIMESERIES_COLUMNS)}


@dataclass
class Snapshot:
    densities: np.ndarray  # (6, n) component densities
    x: np.ndarray          # (n,) position grid, um
    t_ms: float


def read_snapshot(path) -> Snapshot:
    """One ADS1 binary snapshot: magic, u32 n, u32 6, f64 dx, f64 x_min,
    f64 t_ms, then the (6, n) float64 densities row-major little-endian."""
    raw = Path(path).read_bytes()
    if raw[:4] != SNAPSHOT_MAGIC:
        raise SchemaError(f"{path}: bad magic {raw[:4]!r}")
    n, nc, dx, x_min, t_ms = struct.unpack("<IIddd", raw[4:36])
    if nc != N_COMPONENTS:
        raise SchemaError(f"{path}: expected 6 components, got {nc}")
    body = np.frombuffer(raw[36:], dtype="<f8")
    if body.size != n * nc:
        raise SchemaError(f"{path}: truncated snapshot "
                          f"({body.size} of {n * nc} values)")
    x = x_min + dx * np.arange(n)
    return Snapshot(body.reshape(nc, n).copy(), x, t_ms)


def read_snapshot_series(directory) -> list[Snapshot]:
    """All snapshot_*.bin in a directory, sorted by time."""
    paths = sorted(Path(directory).glob("snapshot_*.bin"))
    if not paths:
        raise SchemaError(f"{directory}: no snapshot_*.bin files found")
    snaps = [read_snapshot(p) for p in paths]
    n = snaps[0].densities.shape[1]
    for p, s in zip(paths, snaps):
        if s.densities.shape[1] != n:
            raise SchemaError(f"{p}: grid size {s.densities.shape[1]} "
                              f"differs from first snapshot ({n})")
    snaps.sort(key=lambda s: s.t_ms)
    return snaps
