"""Rayleigh-quotient lower bounds for the Harper operator (lambda = 2) on l^2(Z).

Three trial families are evaluated in closed form:

* x_n = r^|n|                                   (one parameter alpha, r = tan(alpha/2))
* y_{2k} = A r^|k|, y_{2k+1} = B r^|k|          (alpha plus amplitudes A^2 + B^2 = 1)
* z supported on n in {-2..2}, weights (sin a/sqrt10, sqrt(2/5) sin a, cos a, ...)

For every family ||H v|| / ||v|| <= ||H||, so each value is a lower bound on the
norm. ``optimize_lower`` searches the free angle; fixing it at the classical
choices reproduces f1, f2 and f3 from :mod:`amo.bounds`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import golden_min

PI = math.pi
HALF_PI = 0.5 * PI
SQRT10 = math.sqrt(10.0)
# keeps alpha off the end points where r -> 0 or r -> 1 (0/0 in the closed forms)
ALPHA_EDGE = 1e-7
COARSE_GRID = 64
GOLDEN_ITERS = 200


@dataclass(frozen=True)
class TrialParams:
    r: float
    alpha: float
    A: float = 1.0
    B: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"decay ratio r must lie in (0, 1), got {self.r}")
        if abs(self.A * self.A + self.B * self.B - 1.0) > 1e-12:
            raise ValueError("amplitudes must satisfy A^2 + B^2 = 1")

    @classmethod
    def from_alpha(cls, alpha: float, A: float = 1.0, B: float = 0.0) -> "TrialParams":
        return cls(math.tan(alpha / 2.0), alpha, A, B)


def geom_cos_sum(r: float, a: float, b: float) -> float:
    """sum_{k in Z} r^|k| cos(a k + b)."""
    return (1.0 - r * r) * math.cos(b) / (1.0 - 2.0 * r * math.cos(a) + r * r)


def geom_cos_sum_shifted(r: float, a: float, b: float) -> float:
    """sum_{k in Z} r^(|k| + |k-1|) cos(a k + b)."""
    r2 = r * r
    return 2.0 * r * (1.0 - r2) * math.cos(a / 2.0) * math.cos(b + a / 2.0) / (1.0 - 2.0 * r2 * math.cos(a) + r2 * r2)


def _damp(cos2a, sin2a, angle):
    # cos^2 a / (1 - sin^2 a cos^2 t), denominator rewritten as cos^2 a + sin^2 a sin^2 t
    st = math.sin(angle)
    return cos2a / (cos2a + sin2a * st * st)


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= 0.5:
        raise ValueError(f"theta must lie in [0, 1/2], got {theta}")
    return theta


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < HALF_PI:
        raise ValueError(f"alpha must lie in (0, pi/2), got {alpha}")
    return alpha


def rayleigh_x_sq(theta: float, alpha: float) -> float:
    theta, alpha = _check_theta(theta), _check_alpha(alpha)
    ca, sa = math.cos(alpha), math.sin(alpha)
    ca2, sa2 = ca * ca, sa * sa
    c1 = math.cos(PI * theta)
    return (
        6.0
        - 4.0 * ca2 / (1.0 + ca)
        + 2.0 * _damp(ca2, sa2, 2 * PI * theta)
        + 8.0 * sa * c1 * c1 * _damp(ca2, sa2, PI * theta)
    )


def rayleigh_x(theta: float, alpha: float) -> float:
    """||H x|| / ||x|| for x_n = tan(alpha/2)^|n|."""
    return math.sqrt(rayleigh_x_sq(theta, alpha))


def _y_coefficients(theta: float, alpha: float) -> tuple[float, float, float, float]:
    # (4 + 2 sin a) + 2 (a0 A^2 + b0 B^2 + g0 A B)
    ca, sa = math.cos(alpha), math.sin(alpha)
    ca2, sa2 = ca * ca, sa * sa
    c1, c2, c4 = math.cos(PI * theta), math.cos(2 * PI * theta), math.cos(4 * PI * theta)
    d4 = _damp(ca2, sa2, 4 * PI * theta)
    d2 = _damp(ca2, sa2, 2 * PI * theta)
    return 4.0 + 2.0 * sa, d4, c4 * d4, 4.0 * c1 * c1 * (1.0 + sa * c2) * d2


def rayleigh_y_sq(theta: float, alpha: float, A: float, B: float) -> float:
    theta, alpha = _check_theta(theta), _check_alpha(alpha)
    if abs(A * A + B * B - 1.0) > 1e-12:
        raise ValueError("amplitudes must satisfy A^2 + B^2 = 1")
    base, a0, b0, g0 = _y_coefficients(theta, alpha)
    return base + 2.0 * (a0 * A * A + b0 * B * B + g0 * A * B)


def rayleigh_y(theta: float, alpha: float, A: float, B: float) -> float:
    """||H y|| / ||y|| for the even/odd interleaved geometric vector."""
    return math.sqrt(rayleigh_y_sq(theta, alpha, A, B))


def maximize_AB(alpha0: float, beta0: float, gamma0: float) -> tuple[float, float, float]:
    """Max of 2(alpha0 A^2 + beta0 B^2 + gamma0 A B) over A^2 + B^2 = 1, with a maximiser (A >= 0)."""
    value = alpha0 + beta0 + math.hypot(alpha0 - beta0, gamma0)
    phi = 0.5 * math.atan2(gamma0, alpha0 - beta0)
    A, B = math.cos(phi), math.sin(phi)
    return value, A, B


def _z_coefficients(theta: float) -> tuple[float, float, float]:
    c = math.cos(2 * PI * theta)
    poly = c + 2.0 * c * c + 2.0 * c**4
    # 6 cos^2 + 2 sin^2 (1 + 4/5 poly) + sin 2a (sqrt10 + 8c/sqrt10) = 2(a0 cos^2 + b0 sin^2 + g0 sin cos)
    return 3.0, 1.0 + 0.8 * poly, SQRT10 + 8.0 * c / SQRT10


def rayleigh_z_sq(theta: float, alpha: float) -> float:
    theta = _check_theta(theta)
    a0, b0, g0 = _z_coefficients(theta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return 2.0 * (a0 * ca * ca + b0 * sa * sa + g0 * sa * ca)


def rayleigh_z(theta: float, alpha: float) -> float:
    """||H z|| for the unit vector z supported on {-2, ..., 2}."""
    return math.sqrt(rayleigh_z_sq(theta, alpha))


# ------------------------------------------------------------ classical choices

def alpha_f1(theta: float) -> float:
    """alpha with cos^2 alpha = sin(pi theta) / (1 + sin(pi theta))."""
    s = math.sin(PI * theta)
    return math.acos(math.sqrt(s / (1.0 + s)))


def alpha_f2(theta: float) -> float:
    """alpha with sin^2 alpha = 1 / (1 + |sin 4 pi theta|), pulled inside (0, pi/2)."""
    s4 = abs(math.sin(4 * PI * theta))
    return min(math.asin(math.sqrt(1.0 / (1.0 + s4))), HALF_PI - ALPHA_EDGE)


def y_best_amplitudes(theta: float, alpha: float) -> tuple[float, float, float]:
    """(value^2, A, B) for the y family at fixed alpha, amplitudes optimised in closed form."""
    base, a0, b0, g0 = _y_coefficients(_check_theta(theta), _check_alpha(alpha))
    val, A, B = maximize_AB(a0, b0, g0)
    return base + val, A, B


def z_best(theta: float) -> tuple[float, float]:
    """(value^2, alpha) for the z family; the optimum over alpha is exact."""
    val, A, B = maximize_AB(*_z_coefficients(_check_theta(theta)))
    return val, math.atan2(B, A)


# ------------------------------------------------------------ optimiser

def _maximize_alpha(obj, seeds=()):
    lo, hi = ALPHA_EDGE, HALF_PI - ALPHA_EDGE
    grid = np.linspace(lo, hi, COARSE_GRID)
    vals = [obj(a) for a in grid]
    i = int(np.argmax(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, COARSE_GRID - 1)]
    x, neg = golden_min(lambda s: -obj(s), a, b, tol=0.0, max_iter=GOLDEN_ITERS)
    best = max([(-neg, x), (vals[i], grid[i])] + [(obj(s), s) for s in seeds])
    return best[1], best[0]


def optimize_lower(theta: float) -> tuple[float, TrialParams, str]:
    """Best lower bound over the x, y and z families at theta (lambda = 2).

    The angle is searched on a 64-point grid over (0, pi/2) and refined by
    golden section; the classical angle choices are always among the
    candidates, so the result never falls below max(f1, f2, f3).
    """
    theta = _check_theta(theta)
    results = []

    seeds = [alpha_f1(theta)] if theta > 0 else []
    seeds = [min(max(s, ALPHA_EDGE), HALF_PI - ALPHA_EDGE) for s in seeds]
    ax, vx = _maximize_alpha(lambda a: rayleigh_x_sq(theta, a), seeds)
    results.append((vx, TrialParams.from_alpha(ax), "x"))

    ay, vy = _maximize_alpha(lambda a: y_best_amplitudes(theta, a)[0], [alpha_f2(theta)])
    _, A, B = y_best_amplitudes(theta, ay)
    results.append((vy, TrialParams.from_alpha(ay, A, B), "y"))

    vz, az = z_best(theta)
    results.append((vz, TrialParams.from_alpha(az, math.cos(az), math.sin(az)), "z"))

    value_sq, params, family = max(results, key=lambda item: item[0])
    return math.sqrt(value_sq), params, family
