"""Finite-dimensional Harper matrices h_{theta,lambda} and the rational-angle norm.

At theta = p/q the norm of the almost Mathieu element in the rotation algebra
equals the norm of the q x q periodic Jacobi matrix

    h[n, n]       = lambda * cos(2 pi n p/q + phi)
    h[n, n +- 1]  = 1                 (nearest neighbours)
    h[0, q-1]     = h[q-1, 0] = omega (corner, the boundary twist)

with phi = 0 and omega = +1. The twisted family (phi, omega in {+1, -1}) is
the real symmetric slice of the q-dimensional irreducible representations
and is what the band computation sweeps over.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .eigensolve import eigvals_sym, jacobi_eigh
from .fractions import Fraction, RealLike, best_convergent


@dataclass(frozen=True)
class HarperMatrix:
    fraction: Fraction
    lam: float
    phi: float = 0.0
    omega: int = 1
    entries: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def q(self) -> int:
        return self.fraction.q


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    norm: float


def harper_entries(p: int, q: int, lam: float, phi=0.0, omega=1) -> np.ndarray:
    """Dense entries of the twisted Harper matrix; ``phi``/``omega`` may be arrays (stacked output)."""
    phi = np.asarray(phi, dtype=float)
    omega = np.asarray(omega, dtype=float)
    lead = np.broadcast_shapes(phi.shape, omega.shape)
    phi = np.broadcast_to(phi, lead)[..., None]
    omega = np.broadcast_to(omega, lead)
    n = np.arange(q)
    diag = lam * np.cos(2.0 * np.pi * n * p / q + phi)
    h = np.zeros(lead + (q, q))
    idx = np.arange(q)
    h[..., idx, idx] = diag
    if q == 1:
        h[..., 0, 0] += 2.0 * omega
        return h
    up = np.arange(q - 1)
    h[..., up, up + 1] += 1.0
    h[..., up + 1, up] += 1.0
    # q = 2: the wrap-around lands on the same entry as the neighbour
    h[..., 0, q - 1] += omega
    h[..., q - 1, 0] += omega
    return h


def build_harper(fraction: Fraction, lam: float, phi: float = 0.0, omega: int = 1) -> HarperMatrix:
    if omega not in (1, -1):
        raise ValueError(f"omega must be +1 or -1, got {omega}")
    entries = harper_entries(fraction.p, fraction.q, float(lam), float(phi), omega)
    entries.setflags(write=False)
    return HarperMatrix(fraction, float(lam), float(phi), int(omega), entries)


def spectrum(matrix: HarperMatrix) -> Spectrum:
    w = eigvals_sym(matrix.entries)
    return Spectrum(w, float(np.max(np.abs(w))))


@lru_cache(maxsize=None)
def reflection_bases(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (q x k) of the even and odd subspaces of n -> -n (mod q).

    With trivial twist the Harper matrix commutes with this reflection, so it
    splits into two blocks of about q/2 each.
    """
    even, odd = [], []
    for n in range(q):
        m = (-n) % q
        if m == n:
            col = np.zeros(q)
            col[n] = 1.0
            even.append(col)
        elif n < m:
            col = np.zeros(q)
            col[n] = col[m] = np.sqrt(0.5)
            even.append(col)
            col = col.copy()
            col[m] = -col[m]
            odd.append(col)
    e = np.array(even).T
    o = np.array(odd).T if odd else np.zeros((q, 0))
    e.setflags(write=False)
    o.setflags(write=False)
    return e, o


def _block_eigvals(stack: np.ndarray) -> np.ndarray:
    # eigenvalues of trivial-twist Harper matrices (B, q, q) through the two reflection blocks
    q = stack.shape[-1]
    out = []
    for basis in reflection_bases(q):
        if basis.shape[1]:
            block = basis.T @ stack @ basis
            block = 0.5 * (block + np.swapaxes(block, -1, -2))
            out.append(jacobi_eigh(block, vectors=False)[0])
    return np.sort(np.concatenate(out, axis=-1), axis=-1)


def norm_rational(fraction: Fraction, lam: float) -> float:
    """Operator norm of H_{p/q, lambda}, via the q x q matrix with trivial twist.

    The matrix is built at |lambda|: H_{theta,lambda} and H_{theta,-lambda} share
    their spectrum, but for odd q the trivial-twist matrix at negative lambda
    misses the extreme band edge (q = 1, lambda = -2 gives 0 instead of 4).
    """
    h = harper_entries(fraction.p, fraction.q, abs(float(lam)))
    return float(np.max(np.abs(_block_eigvals(h[None]))))


def norms_rational(fractions: Sequence[Fraction], lambdas: Sequence[float]) -> dict[tuple[Fraction, float], float]:
    """Batched ``norm_rational`` over fractions x lambdas; matrices of equal size share one Jacobi run."""
    by_q: dict[int, list[Fraction]] = {}
    for f in fractions:
        by_q.setdefault(f.q, []).append(f)
    out = {}
    for q, group in by_q.items():
        keys = [(f, float(lam)) for f in group for lam in lambdas]
        stack = np.stack([harper_entries(f.p, q, abs(lam)) for f, lam in keys])
        w = _block_eigvals(stack)
        for key, norm in zip(keys, np.max(np.abs(w), axis=-1)):
            out[key] = float(norm)
    return out


def norm_real(theta: RealLike, lam: float, q_max: int) -> tuple[float, Fraction]:
    """Approximate norm at real theta from its best convergent with denominator <= q_max.

    No error bar is attached: the angle dependence is only known to be Hoelder-1/2
    continuous, without an explicit constant.
    """
    approx = best_convergent(theta, q_max)
    return norm_rational(approx, lam), approx


def gershgorin_bound(lam: float) -> float:
    return 2.0 + abs(lam)


def duality_partner(lam: float) -> tuple[float, float]:
    """(scale, coupling) with ||H_{theta,lam}|| = scale * ||H_{theta,coupling}|| for lam > 0."""
    if lam <= 0:
        raise ValueError("duality is stated for lambda > 0")
    return lam / 2.0, 4.0 / lam

