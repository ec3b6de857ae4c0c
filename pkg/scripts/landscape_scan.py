#!/usr/bin/env python3
"""Scan the planar payoff over the two free angles of the third player,
holding the first two players at their optimal azimuths, and emit a CSV
(c0, c1, payoff) suitable for plotting.

Usage: python scripts/landscape_scan.py [--resolution N] [--out PATH]
"""

import argparse
import math
import sys

import numpy as np

from bellgame.quantum import PlanarAngles, planar_payoff, planar_payoff_grid


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--resolution", type=int, default=90)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()

    axis = np.linspace(-math.pi, math.pi, args.resolution)
    c0, c1 = np.meshgrid(axis, axis, indexing="ij")
    values = planar_payoff_grid(0.0, -math.pi / 2, 0.0, -math.pi / 2, c0, c1)

    out = sys.stdout if args.out == "-" else open(args.out, "w")
    try:
        out.write("c0,c1,payoff\n")
        for i in range(args.resolution):
            for j in range(args.resolution):
                out.write(f"{c0[i, j]:.6f},{c1[i, j]:.6f},{values[i, j]:.9f}\n")
    finally:
        if out is not sys.stdout:
            out.close()

    best = np.unravel_index(np.argmax(values), values.shape)
    print(
        f"# grid max {values[best]:.9f} at c0={c0[best]:.4f}, c1={c1[best]:.4f}; "
        f"exact max {planar_payoff(PlanarAngles(0, -math.pi / 2, 0, -math.pi / 2, 2.158799, 0.588003)):.9f}",
        file=sys.stderr,
    )


if __name__ == "__main__":
    main()
