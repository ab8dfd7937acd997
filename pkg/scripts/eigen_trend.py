#!/usr/bin/env python3
"""Bottom eigenvalue of the Dirichlet truncation as the row count grows.

The triangular family with V(row k) = -sqrt(k) is not bounded from below:
the bottom eigenvalue of the rows <= K truncation keeps sinking as K
grows. This script tabulates that trend and optionally plots it.

Usage: python scripts/eigen_trend.py [--rows 20,40,60,80,100,120] [--plot eigen_trend.png]
"""

import argparse
import sys
import time

from schrograph.probe import eigen_bottom, truncate
from schrograph.zoo import TriangularGraph, triangular_ball, triangular_potential, two_row_rayleigh_closed_form


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", default="20,40,60,80,100,120")
    ap.add_argument("--plot", default=None)
    args = ap.parse_args()
    rows_list = sorted({int(p) for p in args.rows.split(",") if p})

    g = TriangularGraph()
    V = triangular_potential()
    table = []
    print(f"{'rows':>6} {'vertices':>9} {'lambda_min':>14} {'two-row bound':>14} {'secs':>6}")
    for rows in rows_list:
        t0 = time.time()
        t = truncate(g, V, triangular_ball(g, rows))
        lam = eigen_bottom(t, 1)[0]
        bound = two_row_rayleigh_closed_form(rows - 1)
        table.append((rows, lam))
        print(f"{rows:>6} {t.n:>9} {lam:>14.6f} {bound:>14.6f} {time.time()-t0:>6.2f}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        ax.plot([r for r, _ in table], [l for _, l in table], marker="o")
        ax.set_xlabel("rows K")
        ax.set_ylabel("bottom eigenvalue")
        ax.set_title("Dirichlet truncation: bottom eigenvalue vs K")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)
        print(f"plot: {args.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
