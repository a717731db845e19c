#!/usr/bin/env python3
"""Closed-form two-qubit curves over the state angle psi.

Writes the CSV produced by `collect sweep` (columns psi, r_min, r_mean,
r_max, p_detect with r = (16*Y - 1)/3) and optionally renders the four
curves to a PNG.
"""

import argparse
import sys

from collectibility import SWEEP_COLUMNS, sweep_two_qubit


def cli() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=629,
                        help="number of psi grid points (default 629)")
    parser.add_argument("--out", default="sweep.csv",
                        help="CSV output path (default sweep.csv)")
    parser.add_argument("--plot", default=None, metavar="PNG",
                        help="also render the curves to this PNG file")
    args = parser.parse_args()

    rows = sweep_two_qubit(args.points)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    print(f"wrote {args.points} rows to {args.out}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        psi = rows[:, 0]
        ax.plot(psi, rows[:, 1], label="min (worst setting)")
        ax.plot(psi, rows[:, 2], label="mean (random settings)")
        ax.plot(psi, rows[:, 3], label="max (best setting)")
        ax.plot(psi, rows[:, 4], linestyle="--",
                label="detection probability")
        ax.axhline(0.0, color="gray", linewidth=0.6)
        ax.set_xlabel("state angle psi")
        ax.set_ylabel("rescaled collectibility / probability")
        ax.set_xlim(psi[0], psi[-1])
        ax.legend(frameon=False, fontsize=9)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote plot to {args.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(cli())
