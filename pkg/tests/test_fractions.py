import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from amo.fractions import Fraction, best_convergent, convergents, farey_sequence, iter_farey, reduce_symmetry


def brute_farey(n, lo=Q(0), hi=Q(1)):
    vals = {Q(p, q) for q in range(1, n + 1) for p in range(q + 1)}
    return sorted(v for v in vals if lo <= v <= hi)


def test_f5_on_half():
    assert [str(f) for f in farey_sequence(5, (0, Q(1, 2)))] == ["0/1", "1/5", "1/4", "1/3", "2/5", "1/2"]


def test_f1_is_endpoints():
    assert [str(f) for f in farey_sequence(1)] == ["0/1", "1/1"]


@given(st.integers(1, 40))
def test_farey_matches_brute_force(n):
    got = [f.exact() for f in farey_sequence(n)]
    assert got == brute_farey(n)


@given(st.integers(1, 30), st.fractions(0, 1, max_denominator=50), st.fractions(0, 1, max_denominator=50))
def test_farey_subinterval_matches_brute_force(n, a, b):
    lo, hi = min(a, b), max(a, b)
    assert [f.exact() for f in iter_farey(n, lo, hi)] == brute_farey(n, lo, hi)


@given(st.integers(2, 60))
def test_farey_neighbours_are_unimodular(n):
    seq = farey_sequence(n)
    for a, b in zip(seq, seq[1:]):
        assert b.p * a.q - a.p * b.q == 1


def test_farey_length_counts_totients():
    n = 25
    phi = sum(1 for q in range(1, n + 1) for p in range(1, q + 1) if math.gcd(p, q) == 1)
    assert len(farey_sequence(n)) == phi + 1


@pytest.mark.parametrize("text, expected", [("1/3", (1, 3)), ("2/4", (1, 2)), (" 0 ", (0, 1)), ("1", (1, 1))])
def test_parse(text, expected):
    f = Fraction.parse(text)
    assert (f.p, f.q) == expected


@pytest.mark.parametrize("text", ["1/0", "a/b", "3/2", "-1/3", "1/2/3", ""])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        Fraction.parse(text)


def test_constructor_requires_reduced():
    with pytest.raises(ValueError):
        Fraction(2, 4)


@given(st.integers(1, 200).flatmap(lambda q: st.tuples(st.integers(0, q), st.just(q))))
def test_reduce_symmetry(pq):
    f = Fraction.reduced(*pq)
    g, flipped = reduce_symmetry(f)
    assert g.exact() <= Q(1, 2)
    assert g.exact() == (1 - f.exact() if flipped else f.exact())


def test_golden_convergents():
    phi = (math.sqrt(5) - 1) / 2
    assert [str(f) for f in convergents(phi, 13)] == ["0/1", "1/1", "1/2", "2/3", "3/5", "5/8", "8/13"]


def test_rational_terminates():
    assert [str(f) for f in convergents(Q(1, 3), 10**6)] == ["0/1", "1/3"]
    assert best_convergent(0.5, 100) == Fraction(1, 2)
    assert best_convergent(0.25, 100) == Fraction(1, 4)


@given(st.floats(0, 1), st.integers(1, 500))
def test_convergents_are_good_approximations(x, q_max):
    cs = convergents(x, q_max)
    assert all(c.q <= q_max for c in cs)
    assert [c.q for c in cs] == sorted(c.q for c in cs)
    for c in cs:
        assert abs(Q(x) - c.exact()) <= Q(1, c.q * c.q)


@given(st.integers(1, 50), st.integers(1, 50))
def test_ordering_agrees_with_exact(a, b):
    fa, fb = Fraction.reduced(a % 51, 51), Fraction.reduced(b % 51, 51)
    assert (fa < fb) == (fa.exact() < fb.exact())
    assert (fa <= fb) == (fa.exact() <= fb.exact())
