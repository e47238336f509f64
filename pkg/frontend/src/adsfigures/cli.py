"""Command line entry point: `figures fig2 ...` and `figures fig3 ...`."""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError, read_snapshot_series, read_timeseries
from .plots import plot_density_surface, plot_populations_velocity

EXIT_OK = 0
EXIT_ERROR = 1


def cmd_fig2(args) -> int:
    series = [read_timeseries(p)
              for p in (args.forward, args.back1, args.back3)]
    plot_populations_velocity(series, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_fig3(args) -> int:
    snaps = read_snapshot_series(args.snapshots)
    plot_density_surface(snaps, args.out, fourth_root=not args.linear)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="figures", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p2 = sub.add_parser("fig2",
                        help="population/velocity panels, three scenarios")
    p2.add_argument("--forward", required=True,
                    help="timeseries.csv of the forward run")
    p2.add_argument("--back1", required=True,
                    help="timeseries.csv of the backward level-1 run")
    p2.add_argument("--back3", required=True,
                    help="timeseries.csv of the backward level-3 run")
    p2.add_argument("-o", "--out", required=True)
    p2.set_defaults(fn=cmd_fig2)

    p3 = sub.add_parser("fig3", help="space-time density surfaces")
    p3.add_argument("--snapshots", required=True,
                    help="directory holding snapshot_*.bin")
    p3.add_argument("--linear", action="store_true",
                    help="plot plain densities instead of fourth roots")
    p3.add_argument("-o", "--out", required=True)
    p3.set_defaults(fn=cmd_fig3)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
