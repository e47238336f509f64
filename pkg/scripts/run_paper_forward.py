#!/usr/bin/env python3
"""Full-parameter forward diode run (the long, overnight configuration).

500 trajectories at roughly 10^6 split steps each; expect many hours on
a single core, so use --workers to spread trajectories over cores and
--resume to pick up a finished run without recomputing.
"""

import argparse
import sys
from pathlib import Path

from atomdiode.cli import main as ads_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("paper_forward"))
    ap.add_argument("--n-traj", type=int, default=500)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()
    return ads_main([
        "run", "--preset", "paper", "--scenario", "forward_1",
        "--n-traj", str(a.n_traj), "--seed", str(a.seed),
        "--workers", str(a.workers), "--emit-densities",
        "--n-snapshots", "9", "--resume", "--out", str(a.out)])


if __name__ == "__main__":
    sys.exit(main())
