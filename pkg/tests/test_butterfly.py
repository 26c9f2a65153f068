import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from amo import butterfly as BF
from amo.fractions import Fraction, farey_sequence
from amo.operator import norm_rational

SQRT2 = math.sqrt(2)


def test_half():
    spec = BF.bands(Fraction(1, 2), 2.0)
    assert spec.count == 1
    assert spec.bands[0].lo == pytest.approx(-2 * SQRT2, abs=1e-12)
    assert spec.bands[0].hi == pytest.approx(2 * SQRT2, abs=1e-12)


def test_third():
    spec = BF.bands(Fraction(1, 3), 2.0)
    assert spec.count == 3
    assert spec.bands[0].lo == pytest.approx(-(1 + math.sqrt(3)), abs=1e-12)
    assert spec.bands[-1].hi == pytest.approx(1 + math.sqrt(3), abs=1e-12)


def test_zero():
    spec = BF.bands(Fraction(0, 1), 2.0)
    assert [(b.lo, b.hi) for b in spec.bands] == [(pytest.approx(-4.0), pytest.approx(4.0))]


@pytest.mark.parametrize("q", range(1, 21))
def test_band_count_parity(q):
    for f in farey_sequence(q):
        if f.q == q:
            assert BF.bands(f, 2.0).count == BF.expected_band_count(q)


def test_samples_in_bands():
    s = BF.sample_phases(Fraction(1, 2), 2.0, 8)
    assert s.size == 32
    assert np.all(np.abs(s) <= 2 * SQRT2 + 1e-12)


def test_samples_hit_every_band():
    f = Fraction(1, 5)
    spec = BF.bands(f, 2.0)
    s = BF.sample_phases(f, 2.0, 16)
    for b in spec.bands:
        assert np.any((s >= b.lo - 1e-12) & (s <= b.hi + 1e-12))


def fractions(max_q=18):
    return st.integers(1, max_q).flatmap(
        lambda q: st.integers(0, q).filter(lambda p: math.gcd(p, q) == 1).map(lambda p: Fraction(p, q))
    )


@given(fractions(), st.sampled_from([0.5, 1.0, 2.0, 3.0]))
def test_containment(f, lam):
    spec = BF.bands(f, lam, verify=0)
    assert np.all(spec.contains(BF.sample_phases(f, lam, 12)))
    assert not spec.dense_fallback


@given(fractions(), st.sampled_from([0.5, 2.0, 3.0]))
def test_mirror_symmetry(f, lam):
    a = BF.bands(f, lam).edges
    b = BF.bands(Fraction(f.q - f.p, f.q), lam).edges
    np.testing.assert_allclose(a, b, atol=1e-9)


@given(fractions())
def test_energy_reflection_at_two(f):
    e = BF.bands(f, 2.0).edges
    np.testing.assert_allclose(e[:, 0], -e[::-1, 1], atol=1e-9)


@given(fractions(), st.sampled_from([0.5, 1.0, 2.0, 3.0]))
def test_outer_edge_is_norm(f, lam):
    assert BF.bands(f, lam).norm == pytest.approx(norm_rational(f, lam), abs=1e-9)


def test_bands_never_overlap():
    for f in farey_sequence(12):
        spec = BF.bands(f, 2.0)
        for a, b in zip(spec.bands, spec.bands[1:]):
            assert a.hi < b.lo


def test_dense_fallback_agrees_with_extremes():
    f = Fraction(2, 7)
    np.testing.assert_allclose(BF._dense_edges(f, 2.0), BF.bands(f, 2.0).edges, atol=1e-12)


def test_band_rejects_inverted():
    with pytest.raises(ValueError):
        BF.Band(1.0, 0.0)


def test_sample_phases_grid_check():
    with pytest.raises(ValueError):
        BF.sample_phases(Fraction(1, 3), 2.0, 0)


def test_export_small():
    recs = BF.butterfly_export(1, 2.0)
    assert [(r.p, r.q, r.band_index) for r in recs] == [(0, 1, 0), (1, 1, 0)]
    assert all(r.lo == pytest.approx(-4) and r.hi == pytest.approx(4) for r in recs)
    recs2 = BF.butterfly_export(2, 2.0)
    assert recs2[:2] == recs
    assert (recs2[2].p, recs2[2].q) == (1, 2)
    assert recs2[2].hi == pytest.approx(2 * SQRT2)


def test_export_count_and_order():
    recs = BF.butterfly_export(10, 2.0)
    expected = sum(BF.expected_band_count(f.q) for f in farey_sequence(10))
    assert len(recs) == expected
    keys = [(r.q, r.p, r.band_index) for r in recs]
    assert keys == sorted(keys)


def test_csv_roundtrip():
    recs = BF.butterfly_export(4, 2.0)
    text = BF.records_to_csv(recs)
    assert "\r" not in text
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == BF.CSV_HEADER
    for row, r in zip(rows[1:], recs):
        assert float(row[5]) == r.lo and float(row[6]) == r.hi
        assert int(row[0]) == r.p and int(row[4]) == r.band_index


def test_sample_phases_many_matches_single():
    fr = farey_sequence(6)
    many = BF.sample_phases_many(fr, 2.0, 5)
    for f, s in zip(fr, many):
        np.testing.assert_allclose(s, BF.sample_phases(f, 2.0, 5), atol=1e-13)
