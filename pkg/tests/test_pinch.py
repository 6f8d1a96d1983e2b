from fractions import Fraction as F

import pytest

from tongues.numeric import RationalInterval, unique_root
from tongues.pinch import (CertificateKind, Configuration, JOutOfRangeError,
                           NotExactPinchError, NotPinchError,
                           build_conjugacy, certify_pinch, enumerate_pinches,
                           extract_configuration, find_exact_pinches,
                           induced_polynomials, invariant_density,
                           itinerary_census, k2_forcing,
                           pinch_b, pinch_count, pinch_omega, pinch_poly,
                           rational_pinch_family, solve_periodic_omega,
                           verify_pinch)
from tongues.pl_engine import PLMap, pl_from_family


def test_pinch_count_values():
    # w = 1 (delta = 1/2): tau = ceil(q/2) - 1
    assert [pinch_count(q, 1) for q in (2, 3, 4, 5)] == [0, 1, 1, 2]
    # w = 4/3 (delta = 4/7)
    assert [pinch_count(q, F(4, 3)) for q in (2, 3, 4, 7)] == [1, 1, 2, 3]
    with pytest.raises(ValueError):
        pinch_count(3, 0)


def test_pinch_b_golden_ratio_oracle():
    # (1-y)(1+y)^2 = 1  <=>  y^2 + y - 1 = 0 on (0, 1)
    b = pinch_b(3, 1, 1, width=F(1, 10 ** 12))
    assert isinstance(b, RationalInterval)
    # independent oracle: the positive root of y^2 + y - 1
    x = b.mid
    assert abs(x * x + x - 1) < F(1, 10 ** 11)
    assert abs(float(x) - 0.618033988749895) < 1e-9


def test_pinch_b_exact_rational():
    # (1-y)(1 + 4y/3)^2 = 1 has the rational root 3/4
    assert pinch_b(3, 1, F(4, 3)) == F(3, 4)
    # (1-y)(1 + 4y/3) = 1 has the rational root 1/4
    assert pinch_b(2, 1, F(4, 3)) == F(1, 4)


def test_pinch_b_j_out_of_range():
    with pytest.raises(JOutOfRangeError):
        pinch_b(2, 1, 1)  # tau(2, 1) = 0: no pinch on q = 2 tongues
    with pytest.raises(JOutOfRangeError):
        pinch_b(3, 2, 1)  # tau(3, 1) = 1


def test_solve_periodic_omega_exact():
    f = k2_forcing(F(4, 3))
    omega = solve_periodic_omega(F(3, 4), f, 1, 3)
    assert omega == F(4, 7)
    # the break at 0 really is 1/3-periodic there
    g = pl_from_family(F(3, 4), omega, f)
    assert g.eval(g.eval(g.eval(F(0)))) == 1


def test_verify_pinch_exact_translation():
    f = k2_forcing(F(4, 3))
    cert = verify_pinch(F(3, 4), F(4, 7), f, 1, 3)
    assert cert.kind is CertificateKind.EXACT_TRANSLATION
    assert cert.label() == "exact"
    g = pl_from_family(F(3, 4), F(4, 7), f).power(3)
    assert g.is_translation(1)


def test_verify_pinch_b_zero_is_rotation():
    # b = 0 degenerates to the rigid rotation: a pinch of every tongue it hits
    f = k2_forcing(1)
    cert = verify_pinch(F(0), F(1, 3), f, 1, 3)
    assert cert.kind is CertificateKind.EXACT_TRANSLATION


def test_verify_pinch_rejects_interior_point():
    # triangle family at b = 1/2, omega in the interior of the 1/2 tongue:
    # f^2 is not a translation
    f = k2_forcing(1)
    with pytest.raises(NotPinchError) as ei:
        verify_pinch(F(1, 2), F(1, 2), f, 1, 2)
    assert ei.value.witness is not None


def test_certify_pinch_interval_grade():
    pt = certify_pinch(1, 3, 1, 1)  # irrational b (golden ratio conjugate)
    assert pt.certificate.kind is CertificateKind.INTERVAL_CERTIFIED
    assert pt.certificate.epsilon <= F(1, 10 ** 12)
    assert pt.certificate.label().startswith("interval:")
    assert isinstance(pt.b, RationalInterval)
    assert isinstance(pt.omega, RationalInterval)
    d = pt.to_json()
    assert d["p"] == 1 and d["q"] == 3 and d["j"] == 1
    assert d["certificate"] == pt.certificate.label()


def test_pinch_omega_exact_vs_interval():
    assert pinch_omega(1, 3, 1, F(4, 3)) == F(4, 7)
    oms = pinch_omega(1, 3, 1, 1)
    assert isinstance(oms, RationalInterval)
    assert oms.width <= 4 * F(1, 10 ** 12)


def test_enumerate_pinches_k2():
    pts = enumerate_pinches(F(4, 3), 3)
    keys = [(pt.p, pt.q, pt.j) for pt in pts]
    assert keys == [(1, 2, 1), (1, 3, 1), (2, 3, 1)]
    assert all(pt.certificate.kind is CertificateKind.EXACT_TRANSLATION
               for pt in pts)
    assert pts[1].b == F(3, 4) and pts[1].omega == F(4, 7)


def test_rational_pinch_family():
    w, b = rational_pinch_family(2, 4, 2)
    assert b == F(3, 4) and w == 4
    assert pinch_poly(4, 2, w).eval(b) == 1
    pt = certify_pinch(1, 4, 2, w)
    assert pt.b == b
    assert pt.certificate.kind is CertificateKind.EXACT_TRANSLATION
    with pytest.raises(ValueError):
        rational_pinch_family(F(1, 2), 4, 2)


def test_reverse_ordering_in_j():
    # p_{q,j,w}(b) is strictly decreasing in j for b in (0,1), w > 0
    q, w, b = 5, F(2), F(1, 3)
    vals = [pinch_poly(q, j, w).eval(b) if 0 < j else (1 + w * b) ** q
            for j in range(q)]
    vals.append((1 - b) ** q)
    assert all(a > c for a, c in zip(vals, vals[1:]))


def test_census_at_exact_pinch():
    f = k2_forcing(F(4, 3))
    lam = itinerary_census(F(3, 4), F(4, 7), f, 3)
    assert lam == (0, 1, 0, 0)  # exactly one class, at the pinch index j = 1


def test_census_b_zero():
    f = k2_forcing(1)
    assert itinerary_census(0, F(1, 3), f, 3) == (1, 0, 0, 0)


def test_census_two_adjacent_when_break_periodic():
    # when the break at 0 is p/q-periodic (but the map is not a pinch),
    # at most two classes survive and they are adjacent
    f = k2_forcing(1)
    b = F(1, 2)
    omega = solve_periodic_omega(b, f, 1, 3)
    lam = itinerary_census(b, omega, f, 3)
    assert lam == (0, F(5, 6), F(1, 6), 0)
    support = [j for j, v in enumerate(lam) if v != 0]
    assert support == [1, 2]


def test_census_identities_generic_omega():
    # at generic omega the census is exact but can spread over three classes
    f = k2_forcing(1)
    lam = itinerary_census(F(1, 2), F(37, 100), f, 3)
    assert sum(lam) == 1
    assert sum(v != 0 for v in lam) >= 2


def test_extract_configuration():
    f = k2_forcing(F(4, 3))
    c = extract_configuration(F(3, 4), F(4, 7), f, 1, 3)
    assert (c.p, c.q, c.m) == (1, 3, 1)
    assert c.marked == (F(0), F(1, 3))
    assert c.weights == (F(-1), F(4, 3))
    polys = [poly.eval(F(3, 4)) for poly in induced_polynomials(c)]
    assert polys == [F(1)]


def test_configuration_validation():
    with pytest.raises(ValueError):
        Configuration(1, 3, 1, (F(0), F(1, 4)), (F(-1), F(1)))  # off grid
    with pytest.raises(ValueError):
        Configuration(1, 3, 2, (F(0), F(1, 6)), (F(-1), F(1)))  # orbit 1 empty


def test_build_conjugacy_and_density():
    f = k2_forcing(F(4, 3))
    g = pl_from_family(F(3, 4), F(4, 7), f)
    h = build_conjugacy(g, 1, 3)
    assert h.cuts == (F(0), F(4, 7), F(5, 7))
    assert h.slopes == (F(7, 12), F(7, 3), F(7, 6))
    rot = PLMap.rotation(F(1, 3))
    assert h.compose(g) == rot.compose(h)
    eta = invariant_density(g, h)
    assert eta.values == (F(7, 12), F(7, 3), F(7, 6))
    assert eta.integral() == 1
    assert eta.value_at(F(9, 14)) == F(7, 3)


def test_build_conjugacy_trivial_rotation():
    rot = PLMap.rotation(F(1, 3))
    h = build_conjugacy(rot, 1, 3)
    assert h == PLMap.rotation(F(0))


def test_build_conjugacy_rejects_non_pinch():
    f = k2_forcing(1)
    g = pl_from_family(F(1, 2), F(1, 2), f)
    with pytest.raises(NotExactPinchError):
        build_conjugacy(g, 1, 2)


def test_find_exact_pinches():
    f = k2_forcing(F(4, 3))
    found = find_exact_pinches(f, 3)
    assert (F(3, 4), F(4, 7), 1, 3) in found
    assert (F(1, 4), solve_periodic_omega(F(1, 4), f, 1, 2), 1, 2) in found
    for b, omega, p, q in found:
        assert pl_from_family(b, omega, f).power(q).is_translation(p)
