import struct

import numpy as np
import pytest

HEADER = ("t_ms,p1,p2,p3,xbar_um,v_um_per_ms,v_fd_um_per_ms,photon,"
          "dark_pop,norm,se_p1,se_p3")


def write_timeseries_csv(path, n_rows=50, swap=False):
    """Synthetic timeseries with a smooth population double swap."""
    t = np.linspace(0.0, 100.0, n_rows)
    if swap:
        # P1 -> P3 -> P1 handoff with a small transient P2
        p3 = np.exp(-((t - 50.0) / 15.0) ** 2)
        p2 = 0.02 * np.exp(-((t - 50.0) / 25.0) ** 2)
        p1 = 1.0 - p2 - p3
    else:
        p1 = np.ones_like(t)
        p2 = np.zeros_like(t)
        p3 = np.zeros_like(t)
    v = 0.05 * np.ones_like(t)
    rows = np.column_stack([t, p1, p2, p3, -260.0 + v * t, v, v,
                            np.zeros_like(t), p1, np.ones_like(t),
                            np.full_like(t, 1e-3), np.full_like(t, 1e-3)])
    with open(path, "w", newline="\n") as fh:
        fh.write(HEADER + "\n")
        for row in rows:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")
    return path


def write_snapshot_bin(path, densities, dx=1.0, x_min=-8.0, t_ms=0.0):
    densities = np.asarray(densities, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(b"ADS1")
        fh.write(struct.pack("<IIddd", densities.shape[1], 6, dx, x_min,
                             t_ms))
        fh.write(densities.tobytes())
    return path


def make_snapshot_dir(directory, n_snaps=4, n_points=16, value=None):
    """Directory of synthetic snapshots: a drifting bump, or a constant
    density when value is given."""
    directory.mkdir(parents=True, exist_ok=True)
    x = -8.0 + np.arange(n_points)
    for idx in range(n_snaps):
        dens = np.zeros((6, n_points))
        if value is None:
            dens[0] = np.exp(-((x - (-6.0 + 4.0 * idx)) / 2.0) ** 2)
            dens[4] = 0.5 * dens[0][::-1]
        else:
            dens[0] = value
            dens[4] = value
        write_snapshot_bin(directory / f"snapshot_{idx:04d}.bin", dens,
                           t_ms=2.5 * idx)
    return directory


@pytest.fixture
def scenario_csvs(tmp_path):
    fwd = write_timeseries_csv(tmp_path / "forward.csv", swap=True)
    b1 = write_timeseries_csv(tmp_path / "back1.csv")
    b3 = write_timeseries_csv(tmp_path / "back3.csv")
    return fwd, b1, b3
