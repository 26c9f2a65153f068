"""Plot the bound curves against computed norms from ``amo bounds --sweep``.

    amo bounds --sweep --qmax 60 --out bounds.csv
    python3 scripts/plot_bounds.py bounds.csv --out bounds.png

Grid rows draw the curves; rows labelled with a fraction add the norm dots.
Bounds that are undefined at a given theta are empty cells and leave gaps.
"""
from __future__ import annotations

import argparse
import csv

import numpy as np


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv")
    ap.add_argument("--out", default="bounds.png")
    ap.add_argument("--squared", action="store_true", help="plot squared values")
    args = ap.parse_args()

    with open(args.csv, newline="") as fh:
        reader = csv.DictReader(fh)
        names = [c for c in reader.fieldnames if c not in ("theta", "point", "norm")]
        rows = list(reader)

    def col(subset, key):
        vals = np.array([float(r[key]) if r[key] not in ("", "nan") else np.nan for r in subset])
        return vals ** 2 if args.squared else vals

    grid = [r for r in rows if r["point"] == "grid"]
    pts = [r for r in rows if r["point"] != "grid"]

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 5))
    t = np.array([float(r["theta"]) for r in grid])
    for name in names:
        y = col(grid, name)
        if np.any(np.isfinite(y)):
            ax.plot(t, y, linewidth=1, label=name)
    ax.plot([float(r["theta"]) for r in pts], col(pts, "norm"), "k.", markersize=3, label="norm")
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel(r"$\|H\|^2$" if args.squared else r"$\|H\|$")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
