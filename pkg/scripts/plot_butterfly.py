"""Render the butterfly from an ``amo butterfly`` CSV (or compute it on the fly).

    amo butterfly --qmax 50 --out butterfly.csv
    python3 scripts/plot_butterfly.py butterfly.csv --out butterfly.png
"""
from __future__ import annotations

import argparse
import csv

import numpy as np


def load(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    cols = [np.array([float(r[k]) for r in rows]) for k in ("theta", "lo", "hi")]
    return cols[0], cols[1], cols[2]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv", nargs="?", help="butterfly CSV; computed at --qmax when omitted")
    ap.add_argument("--qmax", type=int, default=50)
    ap.add_argument("--lambda", dest="lam", type=float, default=2.0)
    ap.add_argument("--out", default="butterfly.png")
    args = ap.parse_args()

    if args.csv:
        theta, lo, hi = load(args.csv)
    else:
        from amo.butterfly import butterfly_export

        recs = butterfly_export(args.qmax, args.lam)
        theta, lo, hi = (np.array([getattr(r, k) for r in recs]) for k in ("theta", "lo", "hi"))

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 7))
    ax.vlines(theta, lo, hi, linewidth=0.5, color="k")
    ax.set_xlim(0, 1)
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("energy")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out} ({len(theta)} bands)")


if __name__ == "__main__":
    main()
