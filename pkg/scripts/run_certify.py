"""Run the certification sweep plus the Hölder probe and print a short summary.

    AMO_THREADS=0 python3 scripts/run_certify.py --qmax 60 --out certificate.json
"""
from __future__ import annotations

import argparse
import time

from amo.certify import certify_sweep, dumps, explore_norm_sq_left, holder_check


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--qmax", type=int, default=60)
    ap.add_argument("--lambdas", default="0.5,1,2,3")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="certificate.json")
    args = ap.parse_args()

    t0 = time.perf_counter()
    report = certify_sweep(args.qmax, [float(x) for x in args.lambdas.split(",")], seed=args.seed)
    value, arg = explore_norm_sq_left(args.qmax)
    report.metadata["explore_min_norm_sq_left"] = {"value": value, "argmin": str(arg)}
    holder = holder_check(args.qmax, 2.0)
    report.metadata["holder"] = {"worst_ratio": holder.worst_ratio, "pair": [str(f) for f in holder.pair]}
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dumps(report.to_json()))

    print(f"{len(report.records)} records, {len(report.failures)} failures ({time.perf_counter() - t0:.1f}s)")
    for name, c in report.constants.items():
        print(f"  {name:24s} {c.value:.7f}  ref {c.reference}  {'ok' if c.passed else 'FAIL'}")
    print(f"  min ||H||^2 on [0,1/4]   {value:.6f} at {arg} (reported only)")
    print(f"  Hölder worst ratio       {holder.worst_ratio:.3f} at {holder.pair[0]}, {holder.pair[1]}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
