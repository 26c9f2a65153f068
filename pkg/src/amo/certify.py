"""Sandwich certification: computed norms against every valid closed-form bound.

``certify_sweep`` evaluates ||H_{p/q, lambda}|| for all reduced p/q in
[0, 1/2] and checks lower <= norm <= upper for each bound that
``bound_table`` marks valid, with a margin tolerance of -1e-9 so that bounds
touching the norm exactly (theta = 1/4, 1/2) still pass. The report also
carries the reproduced constants and serialises to deterministic JSON.

This is floating-point evidence, not an interval-arithmetic proof.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction as _Q
from typing import Optional, Sequence

import numpy as np

from .bounds import BoundSet, bound_table, grid_golden_min, lower_f1_sq, lower_m_sq
from .fractions import Fraction, farey_sequence
from .operator import norms_rational
from .parallel import ordered_map

MARGIN_TOL = -1e-9
GRID_STEP = 1e-5
HOLDER_C = 10.0

# reference values the reproduced constants are compared against
REF_MIN_F1 = 2.56769
REF_MIN_F1_SQ = 6.59303
REF_MIN_M_SQ_LEFT = 7.82387
REF_THETA_HAT = 0.23441
NORM_BRACKET = (2.56, 2.62)


@dataclass(frozen=True)
class CertificateRecord:
    fraction: Fraction
    lam: float
    norm: float
    bound_set: BoundSet
    worst_upper_margin: Optional[float]
    worst_lower_margin: Optional[float]

    @property
    def passed(self) -> bool:
        return all(m is None or m >= MARGIN_TOL for m in (self.worst_upper_margin, self.worst_lower_margin))

    def to_json(self) -> dict:
        return {
            "theta": str(self.fraction),
            "lambda": self.lam,
            "norm": self.norm,
            "worst_upper_margin": self.worst_upper_margin,
            "worst_lower_margin": self.worst_lower_margin,
            "passed": self.passed,
            "bounds": {k: v for k, v in self.bound_set.as_dict().items() if k not in ("theta", "lam") and v is not None},
        }


@dataclass(frozen=True)
class ConstantCheck:
    name: str
    value: float
    reference: float
    tolerance: float
    passed: bool
    argument: Optional[float] = None


@dataclass
class CertificateReport:
    records: list[CertificateRecord]
    constants: dict[str, ConstantCheck] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[CertificateRecord]:
        return [r for r in self.records if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures and all(c.passed for c in self.constants.values())

    def to_json(self) -> dict:
        return {
            "metadata": self.metadata,
            "constants": {
                k: {
                    "value": c.value,
                    "reference": c.reference,
                    "tolerance": c.tolerance,
                    "argument": c.argument,
                    "passed": c.passed,
                }
                for k, c in self.constants.items()
            },
            "records": [r.to_json() for r in self.records],
            "failures": [r.to_json() for r in self.failures],
        }


def make_record(fraction: Fraction, lam: float, norm: float) -> CertificateRecord:
    bs = bound_table(fraction, lam)
    ups = [v - norm for v in bs.uppers().values()]
    lows = [norm - v for v in bs.lowers().values()]
    return CertificateRecord(fraction, float(lam), norm, bs, min(ups) if ups else None, min(lows) if lows else None)


def certify_sweep(q_max: int, lambdas: Sequence[float], workers: int | None = None,
                  constants: bool = True, seed: int = 0) -> CertificateReport:
    """Records for every (p/q in [0, 1/2], q <= q_max) x lambda, ordered by (theta, lambda)."""
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    lambdas = [float(x) for x in lambdas]
    fracs = farey_sequence(q_max, (0, _Q(1, 2)))
    by_q: dict[int, list[Fraction]] = {}
    for f in fracs:
        by_q.setdefault(f.q, []).append(f)
    norms: dict = {}
    for part in ordered_map(lambda group: norms_rational(group, lambdas), list(by_q.values()), workers):
        norms.update(part)
    records = [make_record(f, lam, norms[(f, lam)]) for f in fracs for lam in lambdas]

    report = CertificateReport(records)
    report.metadata = {
        "q_max": q_max,
        "lambdas": lambdas,
        "seed": seed,
        "margin_tolerance": MARGIN_TOL,
        "grid_step": GRID_STEP,
        "n_records": len(records),
    }
    if constants:
        report.constants = verify_constants()
        if 2.0 in lambdas:
            # minimum on [1/4, 1/2] over this sweep's own fractions
            quarter = [r for r in records if r.lam == 2.0 and r.fraction.exact() >= _Q(1, 4)]
            best = min(quarter, key=lambda r: r.norm)
            lo, hi = NORM_BRACKET
            report.constants["min_norm_quarter_half"] = ConstantCheck(
                "min_norm_quarter_half", best.norm, 2.59, hi - 2.59, lo <= best.norm <= hi, best.fraction.value
            )
    return report


# ------------------------------------------------------------------ constants

def min_f1() -> tuple[float, float]:
    """(argmin, min f1) over (1/4, 1/2)."""
    x, fx = grid_golden_min(lower_f1_sq, 0.25, 0.5, step=GRID_STEP)
    return x, math.sqrt(fx)


def min_m_sq(lo: float, hi: float) -> tuple[float, float]:
    """(argmin, min m^2) over [lo, hi] by grid then golden section."""
    return grid_golden_min(lower_m_sq, lo, hi, step=GRID_STEP)


def min_m_sq_grid(lo: float, hi: float, step: float = GRID_STEP) -> float:
    n = int(math.ceil((hi - lo) / step)) + 1
    return float(np.min(lower_m_sq(np.linspace(lo, hi, n))))


def theta_hat(level: float = 8.0, hi: float = 0.25, step: float = GRID_STEP) -> float:
    """Largest t with m^2 >= level on all of [0, t] (grid scan, then bisection on the first crossing)."""
    n = int(math.ceil(hi / step)) + 1
    grid = np.linspace(0.0, hi, n)
    below = np.nonzero(lower_m_sq(grid) < level)[0]
    if below.size == 0:
        return hi
    a, b = grid[below[0] - 1], grid[below[0]]
    for _ in range(60):
        mid = 0.5 * (a + b)
        if lower_m_sq(mid) >= level:
            a = mid
        else:
            b = mid
    return float(a)


def verify_constants() -> dict[str, ConstantCheck]:
    out: dict[str, ConstantCheck] = {}
    t1, v1 = min_f1()
    out["min_f1"] = ConstantCheck("min_f1", v1, REF_MIN_F1, 1e-4, abs(v1 - REF_MIN_F1) <= 1e-4, t1)
    out["min_f1_sq"] = ConstantCheck(
        "min_f1_sq", v1 * v1, REF_MIN_F1_SQ, 1e-3, abs(v1 * v1 - REF_MIN_F1_SQ) <= 1e-3, t1
    )
    tm, vm = min_m_sq(0.0, 0.25)
    out["min_m_sq_left"] = ConstantCheck(
        "min_m_sq_left", vm, REF_MIN_M_SQ_LEFT, 1e-3, vm >= REF_MIN_M_SQ_LEFT - 1e-3, tm
    )
    grid_min = min_m_sq_grid(0.0, REF_THETA_HAT)
    out["m_sq_ge_8"] = ConstantCheck("m_sq_ge_8", grid_min, 8.0, 0.0, grid_min >= 8.0, REF_THETA_HAT)
    th = theta_hat()
    out["theta_star_8"] = ConstantCheck("theta_star_8", th, REF_THETA_HAT, 1e-5, th >= REF_THETA_HAT - 1e-5)
    return out


def explore_norm_sq_left(q_max: int, lam: float = 2.0) -> tuple[float, Fraction]:
    """Empirical min of ||H||^2 over Farey points of [0, 1/4]; reported only, never asserted."""
    value, arg = min_norm_interval(0.0, 0.25, q_max, lam)
    return value * value, arg


# ------------------------------------------------------------------ norm scans

def min_norm_interval(lo, hi, q_max: int, lam: float) -> tuple[float, Fraction]:
    """Minimum of the norm over Farey fractions in [lo, hi] with q <= q_max."""
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    lo_q = lo.exact() if isinstance(lo, Fraction) else _Q(lo)
    hi_q = hi.exact() if isinstance(hi, Fraction) else _Q(hi)
    if lo_q > hi_q:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    fracs = farey_sequence(q_max, (lo_q, hi_q))
    if not fracs:
        raise ValueError(f"no fractions with q <= {q_max} in [{lo}, {hi}]")
    norms = norms_rational(fracs, [lam])
    best = min(fracs, key=lambda f: (norms[(f, float(lam))], f.q))
    return norms[(best, float(lam))], best


def holder_ratio(a: Fraction, b: Fraction, norm_a: float, norm_b: float) -> float:
    gap = abs(a.value - b.value)
    return abs(norm_a - norm_b) / math.sqrt(gap) if gap else 0.0


@dataclass(frozen=True)
class HolderResult:
    worst_ratio: float
    pair: tuple[Fraction, Fraction]
    C: float

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= self.C


def holder_check(q_max: int, lam: float, C: float = HOLDER_C) -> HolderResult:
    """Worst |norm(t) - norm(t')| / sqrt|t - t'| over consecutive Farey neighbours in [0, 1].

    The constant C is an empirical, generous choice; no explicit constant is known.
    """
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    half = farey_sequence(q_max, (0, _Q(1, 2)))
    norms = norms_rational(half, [lam])
    value = {f: norms[(f, float(lam))] for f in half}
    for f in half:  # theta -> 1 - theta leaves the norm unchanged
        value.setdefault(Fraction(f.q - f.p, f.q), value[f])
    seq = farey_sequence(q_max)
    worst, pair = 0.0, (seq[0], seq[0])
    for a, b in zip(seq, seq[1:]):
        r = holder_ratio(a, b, value[a], value[b])
        if r > worst:
            worst, pair = r, (a, b)
    return HolderResult(worst, pair, float(C))


# ------------------------------------------------------------------ JSON

def _emit(obj, out: list[str]) -> None:
    if obj is None or (isinstance(obj, float) and not math.isfinite(obj)):
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append("null" if not math.isfinite(x) else format(x, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            _emit(str(k), out)
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with every float written at 17 significant digits (non-finite values become null)."""
    out: list[str] = []
    _emit(obj, out)
    return "".join(out) + "\n"
