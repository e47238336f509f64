#!/usr/bin/env python3
"""Run the three desk-scale diode scenarios and write their output files.

Produces one directory per scenario (forward_1, backward_1, backward_3)
under --out, each with timeseries.csv, snapshot binaries/CSVs, and a
manifest.  These outputs feed the figure tool:

    figures fig2 --forward out/forward_1/timeseries.csv \
                 --back1 out/backward_1/timeseries.csv \
                 --back3 out/backward_3/timeseries.csv -o fig2.png
    figures fig3 --snapshots out/forward_1 -o fig3.png

Expect roughly an hour per forward scenario at 10 trajectories on one
core; backward scenarios are deterministic (no jumps) and run a single
trajectory each.
"""

import argparse
import sys
from pathlib import Path

from atomdiode.cli import main as ads_main


def run(scenario: str, out: Path, n_traj: int, seed: int,
        workers: int) -> int:
    args = ["run", "--preset", "desk", "--scenario", scenario,
            "--n-traj", str(n_traj), "--seed", str(seed),
            "--workers", str(workers), "--emit-densities",
            "--n-snapshots", "9", "--resume",
            "--out", str(out / scenario)]
    print(f"== {scenario} ==", flush=True)
    return ads_main(args)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("desk_runs"))
    ap.add_argument("--n-traj", type=int, default=10,
                    help="trajectories for the forward run")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()

    rc = run("forward_1", a.out, a.n_traj, a.seed, a.workers)
    # backward scenarios never populate the photon sector, so one
    # trajectory is already the exact ensemble result
    rc = rc or run("backward_1", a.out, 1, a.seed, 1)
    rc = rc or run("backward_3", a.out, 1, a.seed, 1)
    return rc


if __name__ == "__main__":
    sys.exit(main())
