import random
from fractions import Fraction as F

import pytest

from tongues.numeric import (FactoredPolynomial, LemmaShapeError,
                             RationalInterval, is_plausible_shape, poly_eval,
                             poly_gcd, poly_trim, rat, rat_str,
                             rational_unit_root, refine_root, unique_root)


def oracle_bisect(coeffs, lo, hi, width):
    """Independent root isolator: plain sign bisection on a dense polynomial."""
    flo = poly_eval(coeffs, lo)
    assert flo * poly_eval(coeffs, hi) < 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        fmid = poly_eval(coeffs, mid)
        if fmid == 0:
            return (mid, mid)
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return (lo, hi)


def test_rat_parsing():
    assert rat("3/4") == F(3, 4)
    assert rat(2) == F(2)
    assert rat(F(1, 3)) == F(1, 3)
    assert rat_str(F(-1, 2)) == "-1/2"
    with pytest.raises(TypeError):
        rat(0.5)


def test_interval_arithmetic():
    a = RationalInterval(F(1, 4), F(1, 2))
    b = RationalInterval(F(-1), F(2))
    assert (a + b).lo == F(-3, 4) and (a + b).hi == F(5, 2)
    assert (a - b).lo == F(1, 4) - 2
    prod = a * b
    assert prod.lo == F(-1, 2) and prod.hi == F(1)
    assert (a * F(2)).hi == F(1)
    assert a.contains(F(1, 3))
    assert b.encloses(a)
    assert a.disjoint_from(RationalInterval(F(3, 4), F(1)))
    with pytest.raises(ValueError):
        RationalInterval(F(1), F(0))


def test_interval_str_round_trip():
    iv = RationalInterval(F(-2, 7), F(22, 7))
    assert RationalInterval.from_strs(*iv.to_strs()) == iv


def test_factored_polynomial_eval_expand():
    p = FactoredPolynomial.make([(F(-1), 1), (F(1), 2)])  # (1-y)(1+y)^2
    assert p.eval(F(0)) == 1
    assert p.degree == 3
    # expanded: 1 + y - y^2 - y^3
    assert p.expand() == [F(1), F(1), F(-1), F(-1)]
    y = F(3, 7)
    assert poly_eval(p.expand(), y) == p.eval(y)
    # derivative matches expansion derivative
    coeffs = p.expand()
    dval = sum(i * c * y ** (i - 1) for i, c in enumerate(coeffs) if i)
    assert p.eval_derivative(y) == dval


def test_factored_polynomial_merges_duplicates():
    p = FactoredPolynomial.make([(F(2), 1), (F(2), 2)])
    assert p.factors == ((F(2), 3),)
    with pytest.raises(ValueError):
        FactoredPolynomial.make([(F(-2), 1)])
    with pytest.raises(ValueError):
        FactoredPolynomial.make([(F(1), 0)])


def test_plausible_shape():
    # (1-y)(1+y)^2: sum k = 1 > 0, p(1) = 0 < 1 -> has a unit root
    assert is_plausible_shape(FactoredPolynomial.make([(F(-1), 1), (F(1), 2)]))
    # (1-y)^3: single-signed -> shape error
    with pytest.raises(LemmaShapeError):
        is_plausible_shape(FactoredPolynomial.make([(F(-1), 3)]))
    # (1-y)(1+y/4)^2: sum k = -1/2 < 0 -> no root
    assert not is_plausible_shape(
        FactoredPolynomial.make([(F(-1), 1), (F(1, 4), 2)]))


def test_unique_root_against_oracle():
    # (1-y)(1+y)^2 = 1  <=>  y^2 + y - 1 = 0, root = (sqrt(5)-1)/2
    p = FactoredPolynomial.make([(F(-1), 1), (F(1), 2)])
    iv = unique_root(p, F(1, 2 ** 50))
    olo, ohi = oracle_bisect([F(-1), F(1), F(1)], F(0), F(1), F(1, 2 ** 52))
    assert iv.lo <= ohi and olo <= iv.hi  # overlap with oracle enclosure
    assert iv.width <= F(1, 2 ** 50)
    # derivative negative at the root
    assert p.eval_derivative(iv.mid) < 0


def test_refine_root():
    p = FactoredPolynomial.make([(F(-1), 1), (F(1), 3)])
    iv = unique_root(p, F(1, 1000))
    fine = refine_root(p, iv, F(1, 2 ** 60))
    assert iv.encloses(fine)
    assert fine.width <= F(1, 2 ** 60)


def test_rational_unit_root():
    # (1-y)(1+(4/3)y)^2 = 1 at y = 3/4
    p = FactoredPolynomial.make([(F(-1), 1), (F(4, 3), 2)])
    assert rational_unit_root(p) == F(3, 4)
    # golden-ratio case has no rational root
    q = FactoredPolynomial.make([(F(-1), 1), (F(1), 2)])
    assert rational_unit_root(q) is None


def test_eval_interval_contains_range():
    p = FactoredPolynomial.make([(F(-1), 2), (F(3), 1)])
    iv = RationalInterval(F(1, 5), F(2, 5))
    out = p.eval_interval(iv)
    rng = random.Random(0)
    for _ in range(50):
        y = iv.lo + F(rng.randint(0, 1000), 1000) * iv.width
        assert out.contains(p.eval(y))


def test_poly_gcd():
    # (y-1)(y+2) and (y-1)(y-3) share the factor (y-1)
    a = [F(-2), F(1), F(1)]
    b = [F(3), F(-4), F(1)]
    g = poly_trim(poly_gcd(a, b))
    assert len(g) == 2
    assert poly_eval(g, F(1)) == 0
    # coprime polynomials -> constant gcd
    assert len(poly_trim(poly_gcd([F(1), F(1)], [F(2), F(1)]))) == 1
