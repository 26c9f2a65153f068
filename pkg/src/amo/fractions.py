"""Reduced rationals in [0, 1]: Farey sequences, convergents, reflection."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as _Q
from typing import Iterator, Union

RealLike = Union[float, int, "Fraction", _Q]


@dataclass(frozen=True)
class Fraction:
    """A reduced fraction p/q with 0 <= p <= q."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"denominator must be positive, got {self.q}")
        if not 0 <= self.p <= self.q:
            raise ValueError(f"{self.p}/{self.q} is outside [0, 1]")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"{self.p}/{self.q} is not reduced")

    @classmethod
    def reduced(cls, p: int, q: int) -> "Fraction":
        g = math.gcd(p, q)
        return cls(p // g, q // g)

    @classmethod
    def parse(cls, text: str) -> "Fraction":
        """Parse ``"p/q"`` (reduced on the way in) or an integer ``"0"``/``"1"``."""
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return cls.reduced(int(num), int(den))
            return cls.reduced(int(text), 1)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed fraction {text!r}: {exc}") from None

    @property
    def value(self) -> float:
        return self.p / self.q

    def exact(self) -> _Q:
        return _Q(self.p, self.q)

    def __float__(self) -> float:
        return self.value

    def __lt__(self, other: "Fraction") -> bool:
        return self.p * other.q < other.p * self.q

    def __le__(self, other: "Fraction") -> bool:
        return self.p * other.q <= other.p * self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def _exact(x: RealLike) -> _Q:
    if isinstance(x, Fraction):
        return x.exact()
    return _Q(x)


def _first_at_least(lo: _Q, n: int) -> tuple[int, int]:
    u, v = lo.numerator, lo.denominator
    best = (1, 1)
    for d in range(1, n + 1):
        c = -((-u * d) // v)
        if c * best[1] < best[0] * d:
            best = (c, d)
    g = math.gcd(*best)
    return best[0] // g, best[1] // g


def _predecessor(c: int, d: int, n: int) -> tuple[int, int]:
    # left Farey neighbour of c/d in F_n: a*d - b*c = -1 with the largest b <= n
    if c == 0:
        return -1, n  # virtual left neighbour; the recurrence then yields 0/1 -> 1/n
    b_inv = pow(c, -1, d) if d > 1 else 0
    # a*d - b*c = -1  <=>  b*c = 1 (mod d)
    b = b_inv
    if b == 0:
        b = d
    b += ((n - b) // d) * d
    a = (b * c - 1) // d
    return a, b


def iter_farey(n: int, lo: RealLike = 0, hi: RealLike = 1) -> Iterator[Fraction]:
    """Yield F_n restricted to [lo, hi] in increasing order by the neighbour recurrence."""
    if n < 1:
        raise ValueError(f"q_max must be >= 1, got {n}")
    lo_q, hi_q = _exact(lo), _exact(hi)
    if lo_q > hi_q or lo_q < 0 or hi_q > 1:
        raise ValueError(f"invalid interval [{lo}, {hi}]")
    c, d = _first_at_least(lo_q, n)
    a, b = _predecessor(c, d, n)
    while c <= d and _Q(c, d) <= hi_q:
        yield Fraction(c, d)
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b


def farey_sequence(q_max: int, interval: tuple[RealLike, RealLike] = (0, 1)) -> list[Fraction]:
    """All reduced fractions with denominator <= q_max whose value lies in ``interval``.

    >>> [str(f) for f in farey_sequence(5, (0, _Q(1, 2)))]
    ['0/1', '1/5', '1/4', '1/3', '2/5', '1/2']
    """
    lo, hi = interval
    return list(iter_farey(q_max, lo, hi))


def reduce_symmetry(theta: Fraction) -> tuple[Fraction, bool]:
    """Map theta to [0, 1/2] using theta -> 1 - theta; the flag says whether it was reflected."""
    if 2 * theta.p <= theta.q:
        return theta, False
    return Fraction(theta.q - theta.p, theta.q), True


def convergents(x: RealLike, q_max: int) -> list[Fraction]:
    """Continued-fraction convergents of x in [0, 1] with denominator <= q_max.

    Floats are expanded exactly (they are dyadic rationals), so rational inputs
    terminate instead of running into round-off partial quotients.
    """
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    rest = _exact(x)
    if not 0 <= rest <= 1:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    out = []
    while True:
        a = math.floor(rest)
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
        if k > q_max:
            break
        out.append(Fraction(h, k))
        frac = rest - a
        if frac == 0:
            break
        rest = 1 / frac
    return out


def best_convergent(x: RealLike, q_max: int) -> Fraction:
    return convergents(x, q_max)[-1]
