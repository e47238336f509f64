"""Figure builders: population/velocity panels and density surfaces.

Both builders are deterministic for fixed inputs: axes limits are
derived from the data by fixed rules, line styles and color maps are
hard-coded, and nothing depends on wall-clock time or environment.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import Snapshot

# panel (a)/(b): forward, (c)/(d): backward level-1, (e)/(f): backward
# level-3 -- populations on the top row, velocity below each
SCENARIO_TITLES = ("forward", "backward $|1\\rangle$",
                   "backward $|3\\rangle$")
DENSITY_CMAP = "viridis"

LEVEL1_ROWS = (0, 1)   # component order: (1,0),(1,1),(2,0),(2,1),(3,0),(3,1)
LEVEL3_ROWS = (4, 5)


def plot_populations_velocity(series: list[dict], out_path) -> None:
    """3x2 panel figure from the three scenario timeseries dicts
    (forward, backward_1, backward_3): P1 solid, P2 dotted, P3 dashed,
    velocity below each."""
    if len(series) != 3:
        raise ValueError(f"expected 3 scenario series, got {len(series)}")
    fig, axes = plt.subplots(2, 3, figsize=(11.0, 6.0), sharex="col")
    labels = "abcdef"
    for col, (cols, title) in enumerate(zip(series, SCENARIO_TITLES)):
        t = cols["t_ms"]
        ax_p = axes[0, col]
        ax_p.plot(t, cols["p1"], "k-", label="$P_1$")
        ax_p.plot(t, cols["p2"], "k:", label="$P_2$")
        ax_p.plot(t, cols["p3"], "k--", label="$P_3$")
        ax_p.set_ylim(-0.05, 1.05)
        ax_p.set_title(f"({labels[col * 2]}) {title}")
        ax_p.set_ylabel("population" if col == 0 else "")
        if col == 0:
            ax_p.legend(loc="center left", frameon=False)

        ax_v = axes[1, col]
        v = cols["v_um_per_ms"]
        ax_v.plot(t, v, "k-")
        pad = 0.1 * max(float(np.max(np.abs(v))), 1e-12)
        ax_v.set_ylim(float(np.min(v)) - pad, float(np.max(v)) + pad)
        ax_v.set_title(f"({labels[col * 2 + 1]})")
        ax_v.set_xlabel("t (ms)")
        ax_v.set_ylabel("v (μm/ms)" if col == 0 else "")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def surface_data(snapshots: list[Snapshot], fourth_root: bool = True):
    """(x, t, rho1, rho3) arrays for the two surfaces, with the
    fourth-root transform applied when requested."""
    if len(snapshots) < 2:
        raise ValueError("need at least 2 snapshots for a surface")
    x = snapshots[0].x
    t = np.array([s.t_ms for s in snapshots])
    rho1 = np.array([s.densities[list(LEVEL1_ROWS)].sum(axis=0)
                     for s in snapshots])
    rho3 = np.array([s.densities[list(LEVEL3_ROWS)].sum(axis=0)
                     for s in snapshots])
    if fourth_root:
        rho1, rho3 = rho1 ** 0.25, rho3 ** 0.25
    return x, t, rho1, rho3


def plot_density_surface(snapshots: list[Snapshot], out_path,
                         fourth_root: bool = True) -> None:
    """Two (x, t) surfaces of the level-1 and level-3 densities, on the
    fourth-root scale by default so faint outgoing packets stay visible."""
    x, t, rho1, rho3 = surface_data(snapshots, fourth_root)
    vmax = max(float(rho1.max()), float(rho3.max()), 1e-300)

    fig, axes = plt.subplots(1, 2, figsize=(11.0, 4.5), sharey=True)
    scale = r"$\rho^{1/4}$" if fourth_root else r"$\rho$"
    for ax, rho, lvl in ((axes[0], rho1, 1), (axes[1], rho3, 3)):
        mesh = ax.pcolormesh(x, t, rho, cmap=DENSITY_CMAP, vmin=0.0,
                             vmax=vmax, shading="nearest")
        ax.set_title(f"level {lvl}, {scale}")
        ax.set_xlabel("x (μm)")
        fig.colorbar(mesh, ax=ax)
    axes[0].set_ylabel("t (ms)")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
