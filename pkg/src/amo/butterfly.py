"""Band spectra of H_{p/q, lambda} and the Hofstadter butterfly dataset.

The spectrum at theta = p/q is the union over all twists of the eigenvalues of
the q x q Harper matrix. The j-th eigenvalue sweeps an interval as the twist
varies, and its extremes are reached at the four extreme twists

    phi in {0, pi/q}  x  omega in {+1, -1}.

This band-edge principle is used as a numerical method and is checked by
``sample_phases`` containment; when a containment check fails the edges are
recomputed from a dense phase grid instead.

Adjacent bands can touch (the two middle bands for even q). Gaps at or below
``touch_tolerance(lambda)`` count as touching and the bands are merged, which
gives q bands for odd q and q - 1 for even q.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .eigensolve import jacobi_eigh
from .fractions import Fraction, farey_sequence
from .operator import harper_entries
from .parallel import ordered_map

# genuine gaps for q <= 30 at lambda = 2 go down to ~2e-13; touching gaps are
# pure roundoff (a few ulps of the Gershgorin radius)
TOUCH_RTOL = 1e-14
CONTAINMENT_TOL = 1e-7
DENSE_PHASES = 256
VERIFY_PHASES = 8
CSV_HEADER = ("p", "q", "theta", "lambda", "band_index", "lo", "hi")


def touch_tolerance(lam: float) -> float:
    return TOUCH_RTOL * (2.0 + abs(lam))


@dataclass(frozen=True)
class Band:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"band with lo > hi: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, e: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= e <= self.hi + tol


@dataclass(frozen=True)
class BandSpectrum:
    fraction: Fraction
    lam: float
    bands: tuple[Band, ...]
    edges: np.ndarray = field(repr=False, compare=False, default=None)  # (q, 2), one row per eigenvalue index
    dense_fallback: bool = False

    @property
    def count(self) -> int:
        return len(self.bands)

    @property
    def norm(self) -> float:
        return max(abs(self.bands[0].lo), abs(self.bands[-1].hi))

    def contains(self, values, tol: float = CONTAINMENT_TOL) -> np.ndarray:
        v = np.asarray(values, dtype=float)[..., None]
        lo = np.array([b.lo for b in self.bands])
        hi = np.array([b.hi for b in self.bands])
        return np.any((v >= lo - tol) & (v <= hi + tol), axis=-1)


def _twists(q: int, phases: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    phi = np.repeat(phases, 2)
    omega = np.tile([1.0, -1.0], len(phases))
    return phi, omega


def _eigs_for_twists(fractions: Sequence[Fraction], lam: float, phi: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Eigenvalues, shape (len(fractions), n_twists, q); all fractions share one q."""
    q = fractions[0].q
    stack = np.stack([harper_entries(f.p, q, lam, phi, omega) for f in fractions])
    w = jacobi_eigh(stack.reshape(-1, q, q), vectors=False)[0]
    return w.reshape(len(fractions), len(phi), q)


def _merge(edges: np.ndarray, lam: float) -> tuple[Band, ...]:
    tol = touch_tolerance(lam)
    merged = [[edges[0, 0], edges[0, 1]]]
    for lo, hi in edges[1:]:
        if lo - merged[-1][1] <= tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple(Band(float(lo), float(hi)) for lo, hi in merged)


def _extreme_edges(fractions: Sequence[Fraction], lam: float) -> np.ndarray:
    q = fractions[0].q
    phi, omega = _twists(q, np.array([0.0, math.pi / q]))
    w = _eigs_for_twists(fractions, lam, phi, omega)
    return np.stack([w.min(axis=1), w.max(axis=1)], axis=-1)


def _phase_grid(q: int, n: int) -> np.ndarray:
    # the spectrum is 2 pi / q periodic in phi, so one period suffices
    return 2.0 * math.pi * np.arange(n) / (q * n)


def _dense_edges(fraction: Fraction, lam: float) -> np.ndarray:
    phases = np.concatenate([_phase_grid(fraction.q, DENSE_PHASES), [math.pi / fraction.q]])
    phi, omega = _twists(fraction.q, phases)
    w = _eigs_for_twists([fraction], lam, phi, omega)[0]
    return np.stack([w.min(axis=0), w.max(axis=0)], axis=-1)


def _spectra_same_q(fractions: Sequence[Fraction], lam: float, verify: int) -> list[BandSpectrum]:
    edges = _extreme_edges(fractions, lam)
    out = []
    samples = None
    if verify:
        phi, omega = _twists(fractions[0].q, _phase_grid(fractions[0].q, verify))
        samples = _eigs_for_twists(fractions, lam, phi, omega)
    for i, f in enumerate(fractions):
        spec = BandSpectrum(f, float(lam), _merge(edges[i], lam), edges[i])
        if samples is not None and not np.all(spec.contains(samples[i])):
            dense = _dense_edges(f, lam)
            spec = BandSpectrum(f, float(lam), _merge(dense, lam), dense, dense_fallback=True)
        out.append(spec)
    return out


def bands(fraction: Fraction, lam: float, verify: int = VERIFY_PHASES) -> BandSpectrum:
    """Band spectrum at p/q; ``verify`` phases are sampled as a containment guard (0 disables it)."""
    return _spectra_same_q([fraction], float(lam), verify)[0]


def bands_many(fractions: Sequence[Fraction], lam: float, verify: int = VERIFY_PHASES,
               workers: int | None = None) -> list[BandSpectrum]:
    """``bands`` for many fractions; equal denominators share one batched eigensolve."""
    by_q: dict[int, list[int]] = {}
    for i, f in enumerate(fractions):
        by_q.setdefault(f.q, []).append(i)
    groups = sorted(by_q.items())
    results = ordered_map(
        lambda item: _spectra_same_q([fractions[i] for i in item[1]], float(lam), verify), groups, workers
    )
    out: list[BandSpectrum] = [None] * len(fractions)  # type: ignore[list-item]
    for (_, idx), specs in zip(groups, results):
        for i, s in zip(idx, specs):
            out[i] = s
    return out


def sample_phases(fraction: Fraction, lam: float, grid_n: int) -> np.ndarray:
    """All eigenvalues over grid_n phases in one period times omega = +-1 (2 q grid_n values)."""
    if grid_n < 1:
        raise ValueError(f"grid_n must be >= 1, got {grid_n}")
    phi, omega = _twists(fraction.q, _phase_grid(fraction.q, grid_n))
    return _eigs_for_twists([fraction], float(lam), phi, omega)[0].ravel()


def sample_phases_many(fractions: Sequence[Fraction], lam: float, grid_n: int) -> list[np.ndarray]:
    """``sample_phases`` for many fractions, batched by denominator."""
    if grid_n < 1:
        raise ValueError(f"grid_n must be >= 1, got {grid_n}")
    by_q: dict[int, list[int]] = {}
    for i, f in enumerate(fractions):
        by_q.setdefault(f.q, []).append(i)
    out: list[np.ndarray] = [None] * len(fractions)  # type: ignore[list-item]
    for q, idx in by_q.items():
        phi, omega = _twists(q, _phase_grid(q, grid_n))
        w = _eigs_for_twists([fractions[i] for i in idx], float(lam), phi, omega)
        for i, vals in zip(idx, w):
            out[i] = vals.ravel()
    return out


def expected_band_count(q: int) -> int:
    return q if q % 2 else q - 1


# ------------------------------------------------------------------ export

@dataclass(frozen=True)
class BandRecord:
    p: int
    q: int
    theta: float
    lam: float
    band_index: int
    lo: float
    hi: float

    def row(self) -> tuple:
        return (self.p, self.q, self.theta, self.lam, self.band_index, self.lo, self.hi)


def butterfly_export(q_max: int, lam: float, verify: int = 0, workers: int | None = None) -> list[BandRecord]:
    """One record per band for every reduced p/q in [0, 1], q <= q_max, ordered by (q, p, band).

    The containment guard is off by default here because it costs several times
    the edge computation; pass ``verify`` > 0 to enable it.
    """
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    fracs = sorted(farey_sequence(q_max), key=lambda f: (f.q, f.p))
    records = []
    for spec in bands_many(fracs, lam, verify=verify, workers=workers):
        f = spec.fraction
        for j, b in enumerate(spec.bands):
            records.append(BandRecord(f.p, f.q, f.value, float(lam), j, b.lo, b.hi))
    return records


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def records_to_csv(records: Sequence[BandRecord], stream: io.TextIOBase | None = None) -> str:
    buf = stream if stream is not None else io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(
            [r.p, r.q, fmt_float(r.theta), fmt_float(r.lam), r.band_index, fmt_float(r.lo), fmt_float(r.hi)]
        )
    return buf.getvalue() if stream is None else ""
