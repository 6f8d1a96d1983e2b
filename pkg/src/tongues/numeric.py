"""Exact rational scalars, certified interval enclosures, and factored polynomials.

Everything here is exact: `Rational` is `fractions.Fraction` (arbitrary
precision, always in lowest terms) and no operation ever rounds.  Roots of
the polynomial equation p(y) = 1 are generally algebraic irrationals; they
are represented as (polynomial, isolating interval) certificates produced
by exact-sign bisection, never as floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction

_MAX_BISECT = 10_000


class LemmaShapeError(ValueError):
    """Factor signs violate the root-calculus hypothesis (caller bug)."""


def rat(value) -> Fraction:
    """Parse an exact rational from an int, Fraction, or "a/b" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(x: Fraction) -> str:
    """Serialize as "num/den" with an explicit positive denominator."""
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] with exact rational endpoints.

    Any certified real value is asserted to lie inside the interval.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: {self.lo} > {self.hi}")

    @classmethod
    def point(cls, x: Fraction) -> "RationalInterval":
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def encloses(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def disjoint_from(self, other: "RationalInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def __add__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo + other.lo, self.hi + other.hi)
        return RationalInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RationalInterval):
            other = RationalInterval.point(rat(other))
        products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ]
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def to_strs(self) -> tuple[str, str]:
        return (rat_str(self.lo), rat_str(self.hi))

    @classmethod
    def from_strs(cls, lo: str, hi: str) -> "RationalInterval":
        return cls(rat(lo), rat(hi))


@dataclass(frozen=True)
class FactoredPolynomial:
    """Product form p(y) = prod (1 + k_i y)^{e_i} with rational k_i.

    Factors are kept sorted by k with distinct k values; p(0) = 1 always.
    """

    factors: tuple[tuple[Fraction, int], ...]

    @classmethod
    def make(cls, pairs: Iterable[tuple[Fraction, int]]) -> "FactoredPolynomial":
        merged: dict[Fraction, int] = {}
        for k, e in pairs:
            k = rat(k)
            if e < 1:
                raise ValueError("factor exponents must be positive")
            if k < -1:
                raise ValueError(f"factor coefficient {k} < -1")
            merged[k] = merged.get(k, 0) + e
        if not merged:
            raise ValueError("need at least one factor")
        return cls(tuple(sorted(merged.items())))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def eval(self, y: Fraction) -> Fraction:
        y = rat(y)
        result = Fraction(1)
        for k, e in self.factors:
            result *= (1 + k * y) ** e
        return result

    def eval_derivative(self, y: Fraction) -> Fraction:
        """Exact p'(y) by the product rule (safe at factor roots)."""
        y = rat(y)
        total = Fraction(0)
        for i, (k, e) in enumerate(self.factors):
            term = e * k * (1 + k * y) ** (e - 1)
            for j, (kj, ej) in enumerate(self.factors):
                if j != i:
                    term *= (1 + kj * y) ** ej
            total += term
        return total

    def eval_interval(self, iv: RationalInterval) -> RationalInterval:
        result = RationalInterval.point(Fraction(1))
        for k, e in self.factors:
            base = RationalInterval(1 + k * iv.lo, 1 + k * iv.hi) if k >= 0 else \
                RationalInterval(1 + k * iv.hi, 1 + k * iv.lo)
            for _ in range(e):
                result = result * base
        return result

    def sum_of_coefficients(self) -> Fraction:
        """Sum(e_i k_i), the derivative p'(0)."""
        return sum((e * k for k, e in self.factors), Fraction(0))

    def expand(self) -> list[Fraction]:
        """Coefficient list, lowest degree first."""
        coeffs = [Fraction(1)]
        for k, e in self.factors:
            for _ in range(e):
                nxt = [Fraction(0)] * (len(coeffs) + 1)
                for i, c in enumerate(coeffs):
                    nxt[i] += c
                    nxt[i + 1] += c * k
                coeffs = nxt
        return coeffs

    def to_json(self) -> list[list[str]]:
        return [[rat_str(k), str(e)] for k, e in self.factors]


def is_plausible_shape(p: FactoredPolynomial) -> bool:
    """Whether p(y) = 1 has a (then unique) solution in (0, 1).

    Requires a genuinely mixed-sign factor set; an all-nonnegative or
    all-nonpositive input indicates a caller bug and raises.
    """
    ks = [k for k, _ in p.factors]
    if min(ks) >= 0 or max(ks) <= 0:
        raise LemmaShapeError(f"factor coefficients not mixed-sign: {ks}")
    return p.sum_of_coefficients() > 0 and p.eval(Fraction(1)) < 1


def unique_root(p: FactoredPolynomial, width: Fraction) -> RationalInterval:
    """Isolate the unique solution of p(y) = 1 in (0, 1) by exact bisection.

    Returns [lo, hi] with hi - lo <= width, p(lo) > 1 > p(hi).
    """
    width = rat(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if not is_plausible_shape(p):
        raise ValueError("polynomial has no root of p(y)=1 in (0,1)")
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(_MAX_BISECT):
        if hi - lo <= width and lo > 0:
            break
        mid = (lo + hi) / 2
        v = p.eval(mid)
        if v > 1:
            lo = mid
        elif v < 1:
            hi = mid
        else:
            return _bracket_exact_root(p, mid, width)
    return RationalInterval(lo, hi)


def _bracket_exact_root(p, root, width):
    # Bisection landed exactly on the root; build a strict bracket around it.
    step = min(width / 4, root / 2, (1 - root) / 2)
    lo, hi = root - step, root + step
    while p.eval(lo) <= 1:
        lo = (lo + root) / 2
    while p.eval(hi) >= 1:
        hi = (hi + root) / 2
    return RationalInterval(lo, hi)


def refine_root(p: FactoredPolynomial, iv: RationalInterval,
                width: Fraction) -> RationalInterval:
    """Shrink an isolating interval for p(y) = 1, preserving strict signs."""
    lo, hi = iv.lo, iv.hi
    if not (p.eval(lo) > 1 > p.eval(hi)):
        raise ValueError("interval does not bracket the root")
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = p.eval(mid)
        if v > 1:
            lo = mid
        elif v < 1:
            hi = mid
        else:
            return _bracket_exact_root(p, mid, width)
    return RationalInterval(lo, hi)


def rational_unit_root(p: FactoredPolynomial,
                       size_limit: int = 10**8) -> Optional[Fraction]:
    """Exact rational solution of p(y) = 1 in (0, 1), if one exists.

    Uses the rational root theorem on the expanded polynomial
    (p(y) - 1)/y.  Returns None when no rational root exists or the
    integer coefficients are too large to factor cheaply.
    """
    coeffs = p.expand()
    coeffs[0] -= 1  # p(y) - 1; constant term is now 0
    assert coeffs[0] == 0
    reduced = coeffs[1:]  # divide by y
    while reduced and reduced[-1] == 0:
        reduced.pop()
    if not reduced:
        return None
    den_lcm = math.lcm(*(c.denominator for c in reduced))
    ints = [int(c * den_lcm) for c in reduced]
    g = math.gcd(*(abs(c) for c in ints if c)) or 1
    ints = [c // g for c in ints]
    lead, const = ints[-1], ints[0]
    if const == 0:
        # y = 0 is a double root of p - 1; strip and retry on the quotient.
        while ints and ints[0] == 0:
            ints.pop(0)
        if not ints:
            return None
        const = ints[0]
    if abs(const) > size_limit or abs(lead) > size_limit:
        return None
    for num in _divisors(abs(const)):
        for den in _divisors(abs(lead)):
            cand = Fraction(num, den)
            if 0 < cand < 1 and p.eval(cand) == 1:
                return cand
    return None


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


# -- dense polynomial helpers (coefficient lists, lowest degree first) --

def poly_eval(coeffs: Sequence[Fraction], y: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * y + c
    return acc


def poly_trim(coeffs: Sequence[Fraction]) -> list[Fraction]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd over the rationals by the Euclidean algorithm."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, _poly_rem(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = poly_trim(a)
    while len(a) >= len(b):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = poly_trim(a)
        if not a:
            break
    return a
