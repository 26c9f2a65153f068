"""Command-line front end: ``amo <subcommand> ...``.

Exit codes: 0 success, 1 certification or invariant failure, 2 usage error.
All floats are printed with 17 significant digits so they re-parse exactly.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction as _Q
from typing import Optional, Sequence

import numpy as np

from . import bounds as B
from .butterfly import bands, butterfly_export, records_to_csv
from .certify import certify_sweep, dumps, explore_norm_sq_left
from .eigensolve import EigenSolverError
from .fractions import Fraction, best_convergent, farey_sequence, reduce_symmetry
from .operator import build_harper, norm_rational, norms_rational, spectrum
from .identities import eigen_identity_suite, inequality_suite
from .trial_vectors import optimize_lower

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_DECIMAL_QMAX = 1000


class UsageError(ValueError):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return format(x, ".17g") if math.isfinite(x) else "nan"


def parse_theta(text: str, q_max: int, notes: list[str]) -> Fraction:
    """``p/q`` is exact; a decimal is replaced by its best convergent with q <= q_max."""
    if "/" in text or text.strip() in ("0", "1"):
        try:
            return Fraction.parse(text)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        value = _Q(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed theta {text!r}: expected p/q or a decimal") from None
    if not 0 <= value <= 1:
        raise UsageError(f"theta must lie in [0, 1], got {text}")
    approx = best_convergent(value, q_max)
    notes.append(f"# approximant: {approx} (best convergent of {text} with q <= {q_max})")
    notes.append("# caveat: the norm is computed at the approximant; no error bar is available at irrational theta")
    return approx


def parse_lambdas(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"malformed lambda list {text!r}") from None


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) or v is None else v for v in row])
    return buf.getvalue()


def _theta_arg(args) -> Fraction:
    notes: list[str] = []
    theta = parse_theta(args.theta, args.qmax, notes)
    for line in notes:
        print(line)
    return theta


# ------------------------------------------------------------------ subcommands

def cmd_norm(args) -> int:
    theta = _theta_arg(args)
    print(fmt(norm_rational(theta, args.lam)))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    theta = _theta_arg(args)
    spec = spectrum(build_harper(theta, args.lam, args.phi, args.omega))
    for e in spec.eigenvalues:
        print(fmt(e))
    return EXIT_OK


def cmd_bands(args) -> int:
    theta = _theta_arg(args)
    spec = bands(theta, args.lam, verify=args.grid_n)
    rows = [(j, b.lo, b.hi) for j, b in enumerate(spec.bands)]
    if args.format == "json":
        _write(dumps({"theta": str(theta), "lambda": args.lam, "bands": [[b.lo, b.hi] for b in spec.bands]}), args.out)
    else:
        _write(_csv(("band_index", "lo", "hi"), rows), args.out)
    return EXIT_OK


def cmd_butterfly(args) -> int:
    records = butterfly_export(args.qmax, args.lam, verify=args.verify)
    _write(records_to_csv(records), args.out)
    return EXIT_OK


def _bound_row(t: float, lam: float):
    bs = B.bound_table(t, lam)
    return [getattr(bs, name) for name in B.BOUND_NAMES]


def cmd_bounds(args) -> int:
    if args.sweep:
        grid = np.linspace(0.0, 0.5, args.grid_n)
        fracs = farey_sequence(args.qmax, (0, _Q(1, 2)))
        norms = norms_rational(fracs, [args.lam])
        rows = [[float(t), "grid"] + _bound_row(float(t), args.lam) + [None] for t in grid]
        rows += [
            [f.value, str(f)] + [getattr(B.bound_table(f, args.lam), n) for n in B.BOUND_NAMES] + [norms[(f, args.lam)]]
            for f in fracs
        ]
        rows.sort(key=lambda r: (r[0], r[1] != "grid"))
        _write(_csv(("theta", "point") + B.BOUND_NAMES + ("norm",), rows), args.out)
        return EXIT_OK
    theta = _theta_arg(args)
    reduced, _ = reduce_symmetry(theta)
    bs = B.bound_table(reduced, args.lam)
    norm = norm_rational(theta, args.lam)
    if args.format == "json":
        _write(dumps({"theta": str(theta), "lambda": args.lam, "norm": norm, "bounds": {
            k: v for k, v in bs.as_dict().items() if k not in ("theta", "lam") and v is not None}}), args.out)
        return EXIT_OK
    rows = [("norm", norm)] + [(k, v) for k, v in bs.as_dict().items() if k not in ("theta", "lam") and v is not None]
    _write(_csv(("name", "value"), rows), args.out)
    return EXIT_OK


def cmd_lower(args) -> int:
    theta = _theta_arg(args)
    reduced, _ = reduce_symmetry(theta)
    value, params, family = optimize_lower(reduced.value)
    rows = [
        ("optimized", value, family, params.alpha, params.r, params.A, params.B),
        ("m", B.lower_m(reduced.value), "", None, None, None, None),
    ]
    _write(_csv(("name", "value", "family", "alpha", "r", "A", "B"), rows), args.out)
    return EXIT_OK


def cmd_identities(args) -> int:
    report = eigen_identity_suite(args.qmax, parse_lambdas(args.lambdas))
    thetas = farey_sequence(args.qmax)[: args.n_thetas]
    inequality_suite(thetas, args.vectors, args.seed, report=report)
    rows = [(k, "max_residual", v) for k, v in sorted(report.max_residual.items())]
    rows += [(k, "min_margin", v) for k, v in sorted(report.min_margin.items())]
    _write(_csv(("check", "statistic", "value"), rows), args.out)
    print(f"# eigenpairs={report.n_pairs} random_vectors={report.n_vectors} seed={args.seed} "
          f"{'PASS' if report.passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_certify(args) -> int:
    report = certify_sweep(args.qmax, parse_lambdas(args.lambdas), seed=args.seed)
    if args.explore:
        value, arg = explore_norm_sq_left(args.qmax)
        report.metadata["explore_min_norm_sq_left"] = {"value": value, "argmin": str(arg)}
    text = dumps(report.to_json())
    if args.out:
        _write(text, args.out)
    else:
        sys.stdout.write(text)
    bad_constants = [k for k, c in report.constants.items() if not c.passed]
    print(f"# records={len(report.records)} failures={len(report.failures)} "
          f"constants_failed={bad_constants or 'none'}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amo", description="Norms, bands and bounds for almost Mathieu operators.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def theta_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--theta", required=True, help="p/q (exact) or a decimal (approximated by convergents)")
        p.add_argument("--lambda", dest="lam", type=float, default=2.0)
        p.add_argument("--qmax", type=int, default=DEFAULT_DECIMAL_QMAX,
                       help="denominator cap for decimal theta")
        return p

    p = theta_cmd("norm", "operator norm at rational theta")
    p.set_defaults(func=cmd_norm)

    p = theta_cmd("spectrum", "eigenvalues of one twisted Harper matrix")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--omega", type=int, choices=(1, -1), default=1)
    p.set_defaults(func=cmd_spectrum)

    p = theta_cmd("bands", "band spectrum at rational theta")
    p.add_argument("--grid-n", dest="grid_n", type=int, default=8, help="phases for the containment guard")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("butterfly", help="butterfly dataset (CSV) for all p/q with q <= qmax")
    p.add_argument("--qmax", type=int, default=50)
    p.add_argument("--lambda", dest="lam", type=float, default=2.0)
    p.add_argument("--verify", type=int, default=0, help="phases for the containment guard (0 = off)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_butterfly)

    p = sub.add_parser("bounds", help="bound table at theta, or the bound curves with --sweep")
    p.add_argument("--theta")
    p.add_argument("--lambda", dest="lam", type=float, default=2.0)
    p.add_argument("--qmax", type=int, default=None,
                   help="Farey cap for --sweep (default 60) or denominator cap for decimal theta")
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--grid-n", dest="grid_n", type=int, default=501)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = theta_cmd("lower", "trial-vector lower bound (lambda = 2)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lower)

    p = sub.add_parser("identities", help="eigenvector identities and random-vector inequalities")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--qmax", type=int, default=12)
    p.add_argument("--lambdas", default="0.5,1,2,3")
    p.add_argument("--vectors", type=int, default=10000)
    p.add_argument("--n-thetas", dest="n_thetas", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("certify", help="sandwich sweep and constants, JSON report")
    p.add_argument("--qmax", type=int, default=60)
    p.add_argument("--lambdas", default="0.5,1,2,3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--explore", action="store_true", help="also report min ||H||^2 on [0, 1/4] (never asserted)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)
    return parser


def _finish_defaults(args) -> None:
    if args.subcommand == "bounds":
        if args.sweep:
            args.qmax = 60 if args.qmax is None else args.qmax
        else:
            if args.theta is None:
                raise UsageError("bounds needs --theta unless --sweep is given")
            args.qmax = DEFAULT_DECIMAL_QMAX if args.qmax is None else args.qmax
    if getattr(args, "qmax", 1) is not None and getattr(args, "qmax", 1) < 1:
        raise UsageError("--qmax must be >= 1")


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        _finish_defaults(args)
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"amo {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EigenSolverError as exc:
        print(f"amo {args.subcommand}: eigensolver failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
