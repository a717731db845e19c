#!/usr/bin/env python3
"""Recompute the twelve summary quantities for ghz:3, w and bs.

Thin wrapper over `collect table1`: optimized extremes plus Monte Carlo
mean and detection rate for each state, printed next to their targets.
Exits 0 only if every cell lands within its tolerance.
"""

import argparse
import sys

from collectibility.cli import main


def cli() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=10 ** 5,
                        help="Monte Carlo samples per state (default 1e5)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--manifest", default=None,
                        help="write a replayable run manifest to PATH")
    args = parser.parse_args()
    argv = ["table1", "--samples", str(args.samples),
            "--seed", str(args.seed)]
    if args.manifest:
        argv += ["--manifest", args.manifest]
    return main(argv)


if __name__ == "__main__":
    sys.exit(cli())
