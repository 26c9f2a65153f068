"""Closed-form upper and lower bounds for ||H_{theta,lambda}||.

All bound functions accept scalars or numpy arrays of theta. Each has a domain
on which the formula is defined (violations raise ``ValueError``) and,
separately, a validity range on which it is a proven bound; ``bound_table``
applies the validity ranges.

Upper bounds
    upper_bvz   2(1 + sqrt 2 + cos 2 pi theta)                  lambda = 2, theta in [0, 1]
    upper_sqrt  sqrt(4 + lambda^2)                              theta in [1/4, 1/2]
    upper_M0    sqrt(4 + l^2 + 4|l|(cos pi t - sin pi t) cos pi t)  theta in [0, 1/4]
    upper_M1    the cotangent-corrected sqrt(4 + lambda^2)      theta in [1/4, 1/2]
    upper_sz    piecewise, switching at sin^2 pi theta = (sqrt 5 - 1)/2, lambda = 2

Lower bounds (lambda = 2): f1, f2, f3 and m = max(f1, f2, f3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from fractions import Fraction as _Q
from typing import Callable, Optional

import numpy as np

from .fractions import Fraction

PI = math.pi
GOLDEN_SIN2 = (math.sqrt(5.0) - 1.0) / 2.0


def _as_theta(theta):
    if isinstance(theta, Fraction):
        return theta.value
    if isinstance(theta, _Q):
        return float(theta)
    return theta


def _check(theta, lo: float, hi: float, name: str, open_lo: bool = False):
    t = np.asarray(_as_theta(theta), dtype=float)
    bad = (t < lo) | (t > hi) | np.isnan(t)
    if open_lo:
        bad |= t <= lo
    if np.any(bad):
        left = "(" if open_lo else "["
        raise ValueError(f"{name}: theta outside {left}{lo}, {hi}]: {t[bad].ravel()[:3]}")
    return t


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


# ---------------------------------------------------------------- upper bounds

def upper_bvz(theta):
    t = _check(theta, 0.0, 1.0, "upper_bvz")
    return _out(2.0 * (1.0 + math.sqrt(2.0) + np.cos(2 * PI * t)))


def upper_sqrt(lam: float) -> float:
    return math.sqrt(4.0 + lam * lam)


def upper_M0(theta, lam: float):
    t = _check(theta, 0.0, 0.5, "upper_M0")
    c, s = np.cos(PI * t), np.sin(PI * t)
    return _out(np.sqrt(4.0 + lam * lam + 4.0 * abs(lam) * (c - s) * c))


def upper_M1(theta, lam: float):
    t = _check(theta, 0.25, 0.5, "upper_M1")
    # cot(pi/2) is taken as its limit 0
    cot = np.where(t == 0.5, 0.0, np.cos(PI * t) / np.sin(PI * t))
    shrink = 1.0 - np.sqrt((1.0 + np.cos(4 * PI * t) ** 2) / 2.0)
    return _out(np.sqrt(4.0 + lam * lam - (1.0 - cot) * shrink * min(4.0, lam * lam)))


def upper_sz(theta):
    t = _check(theta, 0.0, 0.5, "upper_sz")
    s2 = np.sin(PI * t) ** 2
    low = 2.0 + 2.0 * np.cos(PI * t)
    with np.errstate(divide="ignore", over="ignore"):
        high = 2.0 * np.sqrt(1.0 + 1.0 / s2)
    return _out(np.where(s2 <= GOLDEN_SIN2, low, high))


# ---------------------------------------------------------------- lower bounds

def lower_f1_sq(theta):
    t = _check(theta, 0.0, 0.5, "lower_f1", open_lo=True)
    s, c = np.sin(PI * t), np.cos(PI * t)
    with np.errstate(over="ignore"):  # u = inf for subnormal theta; the terms below stay finite
        u = 1.0 + 1.0 / s
    return _out(
        6.0
        - 4.0 / (u + np.sqrt(u))
        + 2.0 / (1.0 + 4.0 * s * c * c)
        + 8.0 * c * c / (1.0 + s) ** 1.5
    )


def lower_f1(theta):
    return _out(np.sqrt(lower_f1_sq(theta)))


def lower_f2_sq(theta):
    t = _check(theta, 0.0, 0.5, "lower_f2")
    s4 = np.abs(np.sin(4 * PI * t))
    c2, s2 = np.cos(2 * PI * t), np.sin(2 * PI * t)
    c1 = np.cos(PI * t)
    root = np.sqrt(1.0 + s4)
    # 1 / (2 + |tan 2 pi t|) written without the pole at t = 1/4
    inv_tan_term = np.abs(c2) / (2.0 * np.abs(c2) + np.abs(s2))
    cross = 4.0 * c1**2 * inv_tan_term * (1.0 + c2 / root)
    return _out(
        4.0 + 2.0 / root + 2.0 * c2 * c2 / (1.0 + s4)
        + 2.0 * np.sqrt((s2 * s2 / (1.0 + s4)) ** 2 + cross**2)
    )


def lower_f2(theta):
    return _out(np.sqrt(lower_f2_sq(theta)))


def lower_f3_sq(theta):
    t = _check(theta, 0.0, 0.5, "lower_f3")
    c = np.cos(2 * PI * t)
    poly = c + 2.0 * c**2 + 2.0 * c**4
    return _out(
        4.0 + 0.8 * poly
        + np.sqrt((2.0 - 0.8 * poly) ** 2 + (math.sqrt(10.0) + 8.0 * c / math.sqrt(10.0)) ** 2)
    )


def lower_f3(theta):
    return _out(np.sqrt(lower_f3_sq(theta)))


def lower_m_sq(theta):
    t = _check(theta, 0.0, 0.5, "lower_m")
    best = np.maximum(lower_f2_sq(t), lower_f3_sq(t))
    pos = t > 0
    if np.ndim(t) == 0:
        return float(max(best, lower_f1_sq(t))) if pos else float(best)
    if np.any(pos):
        best = best.copy()
        best[pos] = np.maximum(best[pos], lower_f1_sq(t[pos]))
    return best


def lower_m(theta):
    """max(f1, f2, f3); f1 is left out at theta = 0 where it is undefined."""
    return _out(np.sqrt(lower_m_sq(theta)))


# ---------------------------------------------------------------- assembly

@dataclass(frozen=True)
class BoundSet:
    theta: float
    lam: float
    upper_bvz: Optional[float] = None
    upper_sqrt: Optional[float] = None
    upper_M0: Optional[float] = None
    upper_M1: Optional[float] = None
    upper_sz: Optional[float] = None
    lower_f1: Optional[float] = None
    lower_f2: Optional[float] = None
    lower_f3: Optional[float] = None
    lower_m: Optional[float] = None

    def _pick(self, prefix: str) -> dict[str, float]:
        return {
            f.name: getattr(self, f.name)
            for f in fields(self)
            if f.name.startswith(prefix) and getattr(self, f.name) is not None
        }

    def uppers(self) -> dict[str, float]:
        return self._pick("upper_")

    def lowers(self) -> dict[str, float]:
        return self._pick("lower_")

    def valid(self, name: str) -> bool:
        return getattr(self, name) is not None

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


BOUND_NAMES = tuple(f.name for f in fields(BoundSet) if f.name.startswith(("upper_", "lower_")))


def bound_table(theta, lam: float) -> BoundSet:
    """All bounds valid at (theta, lambda), theta in [0, 1/2].

    Validity: bvz, sz, f1, f2, f3, m need |lambda| = 2; sqrt and M1 need
    theta in [1/4, 1/2]; M0 needs theta in [0, 1/4]; f1 needs theta > 0.
    """
    exact = theta.exact() if isinstance(theta, Fraction) else _Q(_as_theta(theta))
    if not 0 <= exact <= _Q(1, 2):
        raise ValueError(f"bound_table: theta must lie in [0, 1/2], got {theta}")
    t = float(exact)
    lam = float(lam)
    harper = abs(lam) == 2.0
    quarter = _Q(1, 4)
    vals: dict[str, float] = {}
    if harper:
        vals["upper_bvz"] = upper_bvz(t)
        vals["upper_sz"] = upper_sz(t)
        if exact > 0:
            vals["lower_f1"] = lower_f1(t)
        vals["lower_f2"] = lower_f2(t)
        vals["lower_f3"] = lower_f3(t)
        vals["lower_m"] = max(vals[k] for k in ("lower_f1", "lower_f2", "lower_f3") if k in vals)
    if exact >= quarter:
        vals["upper_sqrt"] = upper_sqrt(lam)
        vals["upper_M1"] = upper_M1(t, lam)
    if exact <= quarter:
        vals["upper_M0"] = upper_M0(t, lam)
    return BoundSet(theta=t, lam=lam, **vals)


# ---------------------------------------------------------------- 1-D minimisation

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_min(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10, max_iter: int = 200):
    """Golden-section search for a minimiser of a unimodal ``f`` on [a, b]."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    cands = [(f(x), x), (fc, c), (fd, d)]
    return min(cands)[1], min(cands)[0]


def grid_golden_min(f_vec: Callable, lo: float, hi: float, step: float = 1e-5, tol: float = 1e-10):
    """Minimise on [lo, hi]: uniform grid of ``step`` then golden refinement around the best node.

    ``f_vec`` must accept numpy arrays. Returns (argmin, min).
    """
    n = max(2, int(math.ceil((hi - lo) / step)) + 1)
    grid = np.linspace(lo, hi, n)
    vals = np.asarray(f_vec(grid))
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]
    x, fx = golden_min(lambda s: float(f_vec(np.array([s]))[0]), a, b, tol=tol)
    if vals[i] < fx:
        return float(grid[i]), float(vals[i])
    return x, fx
