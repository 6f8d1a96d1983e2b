import filecmp
from fractions import Fraction as F

from tongues.forcing import SineForcing, triangle_forcing
from tongues.numeric import unique_root
from tongues.pinch import pinch_poly
from tongues.tongue_scan import (left_boundary, pinch_candidates, read_csv,
                                 right_boundary, scan_tongues, write_csv)

TOL = F(1, 2 ** 30)


def test_fixed_point_tongue_triangle():
    # x + omega + b*phi(x) = x solvable iff omega in [0, b/2] for delta=1/2
    tr = triangle_forcing(F(1, 2))
    b = F(1, 2)
    left = left_boundary(tr, b, 0, 1, TOL)
    right = right_boundary(tr, b, 0, 1, TOL)
    assert left.contains(F(0))
    assert right.contains(F(1, 4))
    assert left.width <= TOL and right.width <= TOL


def test_boundary_sign_flip():
    # exact predicate flips across the left boundary
    from tongues.pl_engine import pl_from_family
    tr = triangle_forcing(F(1, 2))
    b = F(1, 2)
    left = left_boundary(tr, b, 0, 1, TOL)
    below = pl_from_family(b, left.lo - F(1, 1000), tr)
    above = pl_from_family(b, left.hi + F(1, 1000), tr)
    assert below.displacement_range(F(0))[1] < 0
    assert above.displacement_range(F(0))[1] > 0


def test_symmetric_tongue_half():
    # the triangle forcing phi is even, so x -> -x followed by a half-period
    # shift conjugates f_{b,omega} to f_{b, b/2 - omega} and the 1/2 tongue
    # is symmetric about omega = 1/2 + b/4: left + right = 1 + b/2
    tr = triangle_forcing(F(1, 2))
    b = F(1, 3)
    left = left_boundary(tr, b, 1, 2, TOL)
    right = right_boundary(tr, b, 1, 2, TOL)
    mid_sum = left.mid + right.mid
    assert abs(mid_sum - (1 + b / 2)) <= 4 * TOL


def test_b_zero_degenerate():
    tr = triangle_forcing(F(1, 2))
    records = scan_tongues(tr, 2, [F(0)], TOL)
    for r in records:
        assert r.omega_left == r.omega_right
        assert r.omega_left.lo == F(r.p, r.q)
        assert r.width_lower_bound == 0


def test_scan_ordering_and_left_le_right():
    tr = triangle_forcing(F(1, 2))
    records = scan_tongues(tr, 3, [F(1, 4), F(1, 2)], TOL)
    keys = [(r.q, r.p, r.b) for r in records]
    assert keys == sorted(keys)
    for r in records:
        assert r.omega_left.lo <= r.omega_right.hi + 2 * TOL
        if r.q == 1 and r.b > 0:
            assert r.width_lower_bound > 0


def test_pinch_candidates_filter():
    assert pinch_candidates([], F(1, 10 ** 6)) == []
    tr = triangle_forcing(F(1, 2))
    # near the q=3 pinch b the width upper bound collapses
    b_pinch = unique_root(pinch_poly(3, 1, F(1)), F(1, 2 ** 45))
    b_r = F(round(b_pinch.mid * 2 ** 40), 2 ** 40)
    records = scan_tongues(tr, 3, [F(1, 4), b_r], F(1, 2 ** 45))
    hits = pinch_candidates(records, F(1, 10 ** 6))
    assert (1, 3, b_r) in hits
    assert (2, 3, b_r) in hits
    assert all(b == b_r for (_, _, b) in hits)


def test_sine_scan_no_candidates():
    records = scan_tongues(SineForcing(), 3, [F(1, 4), F(3, 4)], F(1, 2 ** 24))
    assert len(records) == 8
    assert pinch_candidates(records, F(1, 10 ** 6)) == []
    for r in records:
        assert r.width_lower_bound > 0


def test_csv_round_trip(tmp_path):
    tr = triangle_forcing(F(1, 2))
    records = scan_tongues(tr, 3, [F(0), F(1, 4), F(5, 8)], TOL)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_csv(str(p1), records)
    loaded = read_csv(str(p1))
    assert loaded == records
    write_csv(str(p2), loaded)
    assert filecmp.cmp(str(p1), str(p2), shallow=False)
