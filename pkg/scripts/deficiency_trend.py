#!/usr/bin/env python3
"""Radial growth probe: partial norms of the (L - z)u = 0 solution.

Solves the radial recursion on the triangular family and prints how the
partial l2(m) norms S_K grow with K. Heuristic output only.

Usage: python scripts/deficiency_trend.py [--z 0+1i] [--rows 400] [--plot deficiency_trend.png]
"""

import argparse
import sys

from schrograph.probe import deficiency_probe, radial_reduce
from schrograph.zoo import TriangularGraph, triangular_potential


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--z", default="0+1i")
    ap.add_argument("--rows", type=int, default=400)
    ap.add_argument("--plot", default=None)
    args = ap.parse_args()
    z = complex(args.z.replace("i", "j"))

    g = TriangularGraph()
    r = radial_reduce(g, triangular_potential(), args.rows)
    rep = deficiency_probe(r, z, args.rows)

    print(rep.banner)
    print(f"z = {z}, rows = {args.rows}")
    print(f"{'K':>6} {'S_K':>14}")
    step = max(1, args.rows // 20)
    for k in range(step, args.rows + 1, step):
        print(f"{k:>6} {rep.partial_norms[k - 1]:>14.6e}")
    print(rep.growth_label)

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        ax.semilogy(range(1, args.rows + 1), rep.partial_norms)
        ax.set_xlabel("rows K")
        ax.set_ylabel("partial norm S_K")
        ax.set_title(f"radial growth probe at z = {z}")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)
        print(f"plot: {args.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
