"""Eigenvector identities and quadratic-form inequalities for the Harper matrix.

Let X be a real unit eigenvector of h_{theta,lambda} (trivial twist) with
eigenvalue E, and write C_m = cos(2 m pi theta). Every sum runs over m in Z_q
and every neighbour index wraps around: X_{m-1} for m = 0 is X_{q-1}. That
wrap-around is easy to drop by accident and the identities fail without it.

Identities checked (each residual should be ~0):

* ``residual_24``      sum X_m X_{m-1} sin((2m-1) pi theta) = 0
* ``residual_31``      sum X_m X_{m-1} = E/2 - (lambda/2) sum C_m X_m^2
* ``residual_32``      2 lambda sum X_m X_{m-1} C_m = E^2 - lambda S - 2
* ``residual_energy``  the completed-square expansion of E^2

Inequalities (valid for any real unit vector, not only eigenvectors):
``check_lemma22``, ``check_lemma31``, ``check_cor32``.

Every function accepts a single vector of length q or a stack ``(..., q)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigensolve import EigenPair, jacobi_eigh
from .fractions import Fraction, farey_sequence
from .operator import harper_entries

RESIDUAL_TOL = 1e-8
INEQUALITY_SLACK = 1e-12
UNIT_TOL = 1e-10


def _vectors(v) -> np.ndarray:
    x = v.vector if isinstance(v, EigenPair) else v
    return np.asarray(x, dtype=float)


def _require_unit(x: np.ndarray) -> None:
    norms = np.linalg.norm(x, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise ValueError(f"expected unit vectors, got norms deviating by {np.max(np.abs(norms - 1.0)):.3e}")


def _prev(x):  # X_{m-1}
    return np.roll(x, 1, axis=-1)


def _next(x):  # X_{m+1}
    return np.roll(x, -1, axis=-1)


def _angles(theta: Fraction, q: int) -> np.ndarray:
    return np.pi * theta.value * np.arange(q)


def _energy(pair, energy):
    if energy is not None:
        return np.asarray(energy, dtype=float)
    if isinstance(pair, EigenPair):
        return np.asarray(pair.value)
    raise ValueError("an eigenvalue is needed: pass an EigenPair or energy=...")


# ------------------------------------------------------------------ identities

def residual_24(pair, theta: Fraction):
    """|sum_m X_m X_{m-1} sin((2m-1) pi theta)|."""
    x = _vectors(pair)
    m = np.arange(x.shape[-1])
    s = np.sin((2 * m - 1) * np.pi * theta.value)
    return np.abs(np.sum(x * _prev(x) * s, axis=-1))


def residual_31(pair, theta: Fraction, lam: float, energy=None):
    """|sum X_m X_{m-1} - (E/2 - (lambda/2) sum C_m X_m^2)|."""
    x = _vectors(pair)
    e = _energy(pair, energy)
    c = np.cos(2.0 * _angles(theta, x.shape[-1]))
    lhs = np.sum(x * _prev(x), axis=-1)
    return np.abs(lhs - (0.5 * e - 0.5 * lam * np.sum(c * x * x, axis=-1)))


@dataclass(frozen=True)
class SpectralSums:
    """The auxiliary sums S(theta, lambda, E) and T(theta, lambda) of one eigenpair."""

    S: float
    T: float
    E: float
    theta: Fraction
    lam: float
    vector: np.ndarray = field(repr=False, compare=False, default=None)


def _st(x: np.ndarray, e, theta: Fraction, lam: float):
    if lam == 0:
        raise ValueError("S and T are undefined at lambda = 0")
    c = np.cos(2.0 * _angles(theta, x.shape[-1]))
    skip = np.sum(_next(x) * _prev(x), axis=-1)
    S = e * np.sum(c * x * x, axis=-1) + (2.0 / lam) * skip
    T = lam * np.sum(c * c * x * x, axis=-1) + (2.0 / lam) * skip
    return S, T


def spectral_sums(pair: EigenPair, theta: Fraction, lam: float) -> SpectralSums:
    x = _vectors(pair)
    S, T = _st(x, pair.value, theta, lam)
    return SpectralSums(float(S), float(T), float(pair.value), theta, float(lam), x)


def _residual_32(x, e, S, theta: Fraction, lam: float):
    c = np.cos(2.0 * _angles(theta, x.shape[-1]))
    lhs = 2.0 * lam * np.sum(x * _prev(x) * c, axis=-1)
    return np.abs(lhs - (e * e - lam * S - 2.0))


def residual_32(pair: EigenPair, sums: SpectralSums) -> float:
    """|2 lambda sum X_m X_{m-1} C_m - (E^2 - lambda S - 2)|."""
    return float(_residual_32(_vectors(pair), sums.E, sums.S, sums.theta, sums.lam))


def residual_energy(pair, theta: Fraction, lam: float, energy=None):
    """|E^2 - (4 + l^2 - sum (X_{m+1} - X_{m-1} + l X_m sin 2m pi t)^2
    + 4 l (cos pi t - sin pi t) sum X_m X_{m-1} cos (2m-1) pi t)|."""
    x = _vectors(pair)
    e = _energy(pair, energy)
    q = x.shape[-1]
    m = np.arange(q)
    t = theta.value
    square = _next(x) - _prev(x) + lam * x * np.sin(2 * m * np.pi * t)
    cross = np.sum(x * _prev(x) * np.cos((2 * m - 1) * np.pi * t), axis=-1)
    rhs = (
        4.0 + lam * lam
        - np.sum(square * square, axis=-1)
        + 4.0 * lam * (math.cos(math.pi * t) - math.sin(math.pi * t)) * cross
    )
    return np.abs(e * e - rhs)


# ------------------------------------------------------------------ inequalities

def check_lemma22(vector, theta: Fraction):
    """(|sum X_m X_{m-1} cos((2m-1) pi theta)|, (1/2) sqrt(2 (1 + |cos 2 pi theta|)))."""
    x = _vectors(vector)
    _require_unit(x)
    m = np.arange(x.shape[-1])
    t = theta.value
    lhs = np.abs(np.sum(x * _prev(x) * np.cos((2 * m - 1) * np.pi * t), axis=-1))
    rhs = 0.5 * math.sqrt(2.0 * (1.0 + abs(math.cos(2 * math.pi * t))))
    return lhs, rhs


def check_lemma31(vector, theta: Fraction):
    """(2 sum C_m^2 Y_m^2 + sum Y_{m+1} Y_{m-1}, 1 + sqrt(2 (1 + cos^2 4 pi theta)))."""
    y = _vectors(vector)
    _require_unit(y)
    c = np.cos(2.0 * _angles(theta, y.shape[-1]))
    lhs = 2.0 * np.sum(c * c * y * y, axis=-1) + np.sum(_next(y) * _prev(y), axis=-1)
    c4 = math.cos(4 * math.pi * theta.value)
    return lhs, 1.0 + math.sqrt(2.0 * (1.0 + c4 * c4))


def check_cor32(vector, theta: Fraction, lam: float):
    """(l sum C_m^2 Y_m^2 + (2/l) sum Y_{m+1} Y_{m-1}, 2/l + l sqrt((1 + cos^2 4 pi theta)/2))."""
    if not 0.0 < lam <= 2.0:
        raise ValueError(f"lambda must lie in (0, 2], got {lam}")
    y = _vectors(vector)
    _require_unit(y)
    c = np.cos(2.0 * _angles(theta, y.shape[-1]))
    lhs = lam * np.sum(c * c * y * y, axis=-1) + (2.0 / lam) * np.sum(_next(y) * _prev(y), axis=-1)
    c4 = math.cos(4 * math.pi * theta.value)
    return lhs, 2.0 / lam + lam * math.sqrt(0.5 * (1.0 + c4 * c4))


# ------------------------------------------------------------------ suite

def eigenpairs(theta: Fraction, lam: float) -> list[EigenPair]:
    h = harper_entries(theta.p, theta.q, float(lam))
    w, v = jacobi_eigh(h)
    out = []
    for j in range(theta.q):
        x = v[:, j].copy()
        out.append(EigenPair(float(w[j]), x, float(np.linalg.norm(h @ x - w[j] * x))))
    return out


def random_unit_vectors(rng: np.random.Generator, count: int, q: int) -> np.ndarray:
    x = rng.standard_normal((count, q))
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


@dataclass
class IdentityReport:
    """Worst residuals and inequality margins over a suite run (margin = rhs - lhs)."""

    max_residual: dict[str, float] = field(default_factory=dict)
    min_margin: dict[str, float] = field(default_factory=dict)
    n_pairs: int = 0
    n_vectors: int = 0

    def record_residual(self, name: str, value) -> None:
        self.max_residual[name] = max(self.max_residual.get(name, 0.0), float(np.max(value)))

    def record_margin(self, name: str, value) -> None:
        self.min_margin[name] = min(self.min_margin.get(name, math.inf), float(np.min(value)))

    @property
    def passed(self) -> bool:
        return all(r <= RESIDUAL_TOL for r in self.max_residual.values()) and all(
            m >= -INEQUALITY_SLACK for m in self.min_margin.values()
        )


def eigen_identity_suite(q_max: int, lambdas, report: IdentityReport | None = None) -> IdentityReport:
    """All four residuals on every eigenpair of h_{p/q, lambda}, q <= q_max, p/q in [0, 1]."""
    report = report or IdentityReport()
    by_q: dict[int, list[Fraction]] = {}
    for theta in farey_sequence(q_max):
        by_q.setdefault(theta.q, []).append(theta)
    for q, group in by_q.items():
        keys = [(theta, float(lam)) for theta in group for lam in lambdas]
        stack = np.stack([harper_entries(theta.p, q, lam) for theta, lam in keys])
        ws, vs = jacobi_eigh(stack)
        for (theta, lam), w, v in zip(keys, ws, vs):
            x = v.T  # one eigenvector per row
            report.record_residual("eq24", residual_24(x, theta))
            report.record_residual("eq31", residual_31(x, theta, lam, energy=w))
            report.record_residual("energy", residual_energy(x, theta, lam, energy=w))
            if lam != 0:
                S, _ = _st(x, w, theta, lam)
                report.record_residual("eq32", _residual_32(x, w, S, theta, lam))
            report.n_pairs += q
    return report


def inequality_suite(thetas, n_vectors: int, seed: int, cor_lambdas=(0.5, 1.0, 2.0),
                     report: IdentityReport | None = None) -> IdentityReport:
    """The three inequalities on ``n_vectors`` seeded random unit vectors per theta (q = its denominator)."""
    report = report or IdentityReport()
    rng = np.random.default_rng(seed)
    for theta in thetas:
        y = random_unit_vectors(rng, n_vectors, theta.q)
        lhs, rhs = check_lemma22(y, theta)
        report.record_margin("lemma22", rhs - lhs)
        lhs, rhs = check_lemma31(y, theta)
        report.record_margin("lemma31", rhs - lhs)
        for lam in cor_lambdas:
            lhs, rhs = check_cor32(y, theta, lam)
            report.record_margin("cor32", rhs - lhs)
        report.n_vectors += n_vectors
    return report
