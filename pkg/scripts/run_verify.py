#!/usr/bin/env python3
"""Run the physics self-check battery and print a PASS/FAIL table.

Equivalent to `ads verify --suite full`; kept as a script so the checks
can be run without installing the console entry point.
"""

import argparse
import sys

from atomdiode.verify import run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", default="full", choices=["fast", "full"])
    a = ap.parse_args()
    results = run_suite(a.suite, progress=lambda name, ok, detail: print(
        f"{'PASS' if ok else 'FAIL'}  {name:28s} {detail}", flush=True))
    return 0 if all(ok for _, ok, _ in results) else 1


if __name__ == "__main__":
    sys.exit(main())
