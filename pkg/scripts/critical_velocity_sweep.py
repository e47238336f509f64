#!/usr/bin/env python3
"""Sweep the launch velocity for the backward scenarios and locate the
transmission thresholds of the diode.

At full (paper-scale) parameters the backward |3> transmission crosses
T = 0.5 near v0 = 0.35 um/ms (35 cm/s) and the backward |1> channel
opens near 0.50 um/ms.  The desk preset shifts both thresholds down by
the velocity scaling; pass --preset desk for a quick look.

Writes sweep.csv / sweep_manifest.json per scenario under --out.
"""

import argparse
import sys
from pathlib import Path

from atomdiode.cli import main as ads_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="paper", choices=["paper", "desk"])
    ap.add_argument("--out", type=Path, default=Path("velocity_sweep"))
    ap.add_argument("--n-traj", type=int, default=1,
                    help="backward runs are jump-free; 1 is exact")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--values", default=None,
                    help="comma-separated v0 values in um/ms "
                         "(default: preset-appropriate range)")
    a = ap.parse_args()

    if a.values is None:
        if a.preset == "paper":
            values = "0.25,0.30,0.35,0.40,0.45,0.50,0.55"
        else:
            values = "0.025,0.030,0.035,0.040,0.045,0.050,0.055"
    else:
        values = a.values

    rc = 0
    for scenario in ("backward_3", "backward_1"):
        print(f"== {scenario} ==", flush=True)
        rc = rc or ads_main([
            "sweep", "--preset", a.preset, "--scenario", scenario,
            "--param", "v0", "--values", values,
            "--n-traj", str(a.n_traj), "--seed", str(a.seed),
            "--out", str(a.out / scenario)])
    return rc


if __name__ == "__main__":
    sys.exit(main())
