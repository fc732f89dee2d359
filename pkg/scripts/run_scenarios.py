#!/usr/bin/env python
"""Run all three shipped scenarios and drop CSVs under results/.

Usage: python scripts/run_scenarios.py [--trials N] [--workers N]
"""

import argparse
import os
import sys

from ntnsim.cli import main as cli_main

CONFIGS = ("remote", "postdisaster", "kcoverage")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--out", default="results")
    args = parser.parse_args()

    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    for name in CONFIGS:
        argv = [
            "run",
            "--scenario", os.path.join(root, "configs", f"{name}.cfg"),
            "--out", os.path.join(args.out, name),
            "--workers", str(args.workers),
        ]
        if args.trials is not None:
            argv += ["--trials", str(args.trials)]
        print(f"== {name} ==")
        code = cli_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
