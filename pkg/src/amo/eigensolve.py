"""Dense real symmetric eigensolver (cyclic Jacobi, parallel ordering).

Rotations are scheduled with the round-robin ("chess tournament") ordering:
each round touches q/2 disjoint index pairs, so a whole round is applied as
one vectorised update. The same code path handles a single matrix or a stack
of equally sized matrices, which is what the sweeps use.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

OFF_TOL = 1e-13
MAX_SWEEPS = 40
SYM_TOL = 1e-13
# stacks are processed in chunks of about this many float64 entries to stay cache resident
CHUNK_ENTRIES = 1 << 16


class EigenSolverError(RuntimeError):
    """Raised when Jacobi sweeps fail to converge within the cap."""

    def __init__(self, message: str, fingerprint: str):
        super().__init__(f"{message} [matrix {fingerprint}]")
        self.fingerprint = fingerprint


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float


def fingerprint(a: np.ndarray) -> str:
    a = np.ascontiguousarray(a, dtype=float)
    digest = hashlib.sha256(a.tobytes()).hexdigest()[:16]
    return f"shape={a.shape} sha256={digest}"


@lru_cache(maxsize=None)
def _rounds(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_and_fro(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[-1]
    off = a * (1.0 - np.eye(n))
    off2 = np.einsum("...ij,...ij->...", off, off)
    diag2 = np.einsum("...ii,...ii->...", a, a)
    return np.sqrt(off2), np.sqrt(off2 + diag2)


def _sweep(a: np.ndarray, v: np.ndarray | None) -> None:
    rows = np.arange(a.shape[0])[:, None]
    for p, q in _rounds(a.shape[-1]):
        if p.size == 0:
            continue
        app = a[:, p, p]
        aqq = a[:, q, q]
        apq = a[:, p, q]
        nz = apq != 0.0
        safe = np.where(nz, apq, 1.0)
        with np.errstate(over="ignore"):  # |tau| = inf gives t = 0, the correct limit
            tau = (aqq - app) / (2.0 * safe)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
        t = np.where(nz, t, 0.0)
        c = 1.0 / np.sqrt(1.0 + t * t)
        s = t * c

        cr, sr = c[:, :, None], s[:, :, None]
        rp = a[:, p, :]
        rq = a[:, q, :]
        a[:, p, :] = cr * rp - sr * rq
        a[:, q, :] = sr * rp + cr * rq

        cc, sc = c[:, None, :], s[:, None, :]
        cp = a[:, :, p]
        cq = a[:, :, q]
        a[:, :, p] = cc * cp - sc * cq
        a[:, :, q] = sc * cp + cc * cq
        # Rutishauser's updates for the pivot block are more accurate than the products
        a[rows, p, p] = app - t * apq
        a[rows, q, q] = aqq + t * apq
        a[rows, p, q] = 0.0
        a[rows, q, p] = 0.0

        if v is not None:
            vp = v[:, :, p]
            vq = v[:, :, q]
            v[:, :, p] = cc * vp - sc * vq
            v[:, :, q] = sc * vp + cc * vq


def _fix_signs(v: np.ndarray) -> None:
    # first component with |x| > 1e-8 made positive, per column
    big = np.abs(v) > 1e-8
    first = np.argmax(big, axis=-2)
    lead = np.take_along_axis(v, first[..., None, :], axis=-2)
    v *= np.where(lead < 0.0, -1.0, 1.0)


def _solve_chunk(work, vecs, tol, max_sweeps, original) -> None:
    # work / vecs are views into the caller's arrays and are updated in place
    active = np.arange(work.shape[0])
    for _ in range(max_sweeps + 1):
        off, fro = _off_and_fro(work[active])
        active = active[off > tol * fro]
        if active.size == 0:
            return
        sub = work[active]
        subv = vecs[active] if vecs is not None else None
        _sweep(sub, subv)
        work[active] = sub
        if vecs is not None:
            vecs[active] = subv
    raise EigenSolverError(f"Jacobi did not converge in {max_sweeps} sweeps", fingerprint(original[active[0]]))


def jacobi_eigh(a, vectors: bool = True, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decompose one symmetric matrix ``(n, n)`` or a stack ``(..., n, n)``.

    Returns ``(w, V)`` with eigenvalues ascending along the last axis and
    eigenvectors as the columns of ``V`` (``V`` is None when ``vectors`` is
    false). Convergence is declared per matrix once the off-diagonal Frobenius
    norm falls to ``tol`` times the full Frobenius norm.
    """
    a = np.array(a, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    lead_shape, n = a.shape[:-2], a.shape[-1]
    asym = np.abs(a - np.swapaxes(a, -1, -2)).max(initial=0.0)
    if asym > SYM_TOL:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    work = a.reshape(-1, n, n)
    work = 0.5 * (work + np.swapaxes(work, -1, -2))
    batch = work.shape[0]
    vecs = np.broadcast_to(np.eye(n), (batch, n, n)).copy() if vectors else None

    chunk = max(1, CHUNK_ENTRIES // (n * n))
    for start in range(0, batch, chunk):
        sl = slice(start, start + chunk)
        _solve_chunk(work[sl], vecs[sl] if vectors else None, tol, max_sweeps, a.reshape(-1, n, n)[sl])

    w = np.diagonal(work, axis1=-2, axis2=-1).copy()
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    if vectors:
        vecs = np.take_along_axis(vecs, order[:, None, :], axis=-1)
        _fix_signs(vecs)
        vecs = vecs.reshape(*lead_shape, n, n)
    return w.reshape(*lead_shape, n), vecs


def eigvals_sym(a) -> np.ndarray:
    return jacobi_eigh(a, vectors=False)[0]


def eigen_sym(matrix) -> list[EigenPair]:
    """Eigenpairs of a single symmetric matrix, ascending by eigenvalue."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a single square matrix, got shape {a.shape}")
    w, v = jacobi_eigh(a)
    pairs = []
    for j in range(a.shape[0]):
        x = v[:, j].copy()
        x.setflags(write=False)
        res = float(np.linalg.norm(a @ x - w[j] * x))
        pairs.append(EigenPair(float(w[j]), x, res))
    return pairs


def spectral_norm(matrix) -> float:
    """Largest absolute eigenvalue (the operator 2-norm of a symmetric matrix)."""
    w = eigvals_sym(matrix)
    if w.size == 0:
        return 0.0
    return float(np.max(np.abs(w), axis=-1)) if w.ndim == 1 else np.max(np.abs(w), axis=-1)
