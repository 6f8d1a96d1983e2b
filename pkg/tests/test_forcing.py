import math
import random
from fractions import Fraction as F

import pytest

from tongues.forcing import (AmbiguousReductionError, ConstantForcingError,
                             EmptyCellError, GeneralPLForcing,
                             ReducedPLForcing, SineForcing, discretize,
                             normalize_standard_like, parse_forcing,
                             random_reduced_forcing, reduce_general_pl,
                             shift_translate, solve_lengths, triangle_forcing,
                             validate_reduced)


def test_validate_reduced():
    assert validate_reduced((F(-1), F(1)), (F(1, 2), F(1, 2))) is None
    assert "w_1" in validate_reduced((F(-2), F(1)), (F(1, 2), F(1, 2)))
    assert "sum" in validate_reduced((F(-1), F(1)), (F(1, 2), F(1, 3)))
    assert "periodicity" in validate_reduced((F(-1), F(2)), (F(1, 2), F(1, 2)))
    assert "adjacent" in validate_reduced(
        (F(-1), F(1), F(1)), (F(1, 2), F(1, 4), F(1, 4)))
    assert ">= -1" in validate_reduced(
        (F(-1), F(-2), F(5)), (F(1, 3), F(1, 3), F(1, 3)))


def test_triangle():
    tr = triangle_forcing(F(1, 2))
    assert tr.w == (F(-1), F(1))
    assert tr.ell == (F(1, 2), F(1, 2))
    tr3 = triangle_forcing(F(1, 3))
    assert tr3.w == (F(-1), F(1, 2))
    with pytest.raises(ValueError):
        triangle_forcing(F(1))


def test_eval_continuity_and_periodicity():
    f = ReducedPLForcing.make((F(-1), F(3), F(1, 2)),
                              (F(13, 24), F(1, 8), F(1, 3)))
    eps = F(1, 10 ** 12)
    for c in f.cuts:
        left = f.eval(c - eps)
        right = f.eval(c + eps)
        assert abs(left - f.eval(c)) <= 4 * eps
        assert abs(right - f.eval(c)) <= 4 * eps
    assert f.eval(F(0)) == 0
    assert f.eval(F(1)) == 0  # periodic: integral of slopes vanishes
    assert f.eval(F(7, 3)) == f.eval(F(1, 3))


def test_value_range_exact():
    tr = triangle_forcing(F(1, 2))
    lo, hi = tr.value_range(F(0), F(1))
    assert (lo, hi) == (F(-1, 2), F(0))
    lo, hi = tr.value_range(F(1, 4), F(3, 4))
    assert (lo, hi) == (F(-1, 2), F(-1, 4))
    assert tr.max_abs() == F(1, 2)


def test_normalize_standard_like():
    f = normalize_standard_like((F(2), F(-4)), (F(2, 3), F(1, 3)))
    assert f.w[0] == -1
    assert validate_reduced(f.w, f.ell) is None
    with pytest.raises(ConstantForcingError):
        normalize_standard_like((F(1), F(2)), (F(1, 2), F(1, 2)))


def test_reduce_round_trip():
    f = ReducedPLForcing.make((F(-1), F(2), F(1, 3)),
                              (F(1, 2), F(1, 5), F(3, 10)))
    psi = shift_translate(F(1, 8), F(1, 4), f)
    r, s, f2 = reduce_general_pl(psi)
    assert f2 == f
    assert r == F(1, 8)
    assert s % 1 == F(1, 4)  # shift recovered modulo the period


def test_reduce_already_reduced():
    f = triangle_forcing(F(1, 2))
    psi = GeneralPLForcing(f.cuts, f.w, F(0))
    r, s, f2 = reduce_general_pl(psi)
    assert (r, s, f2) == (F(0), F(0), f)


def test_reduce_ambiguous():
    psi = GeneralPLForcing((F(0), F(1, 4), F(1, 2), F(3, 4)),
                           (F(-1), F(1), F(-1), F(1)), F(0))
    with pytest.raises(AmbiguousReductionError):
        reduce_general_pl(psi)


def test_reduce_no_slope_minus_one():
    psi = GeneralPLForcing((F(0), F(1, 2)), (F(-1, 2), F(1, 2)), F(0))
    with pytest.raises(ValueError):
        reduce_general_pl(psi)


def test_discretize_triangle_fixed_point():
    # sampling a 2-step derivative and binning with 2 cells returns it
    samples = [F(-1)] * 50 + [F(1)] * 50
    f = discretize(samples, 2)
    assert f == triangle_forcing(F(1, 2))


def test_discretize_sine_samples_zero_mean():
    n = 256
    samples = [F(math.cos(2 * math.pi * i / n)).limit_denominator(10 ** 6)
               for i in range(n)]
    f = discretize(samples, 8)
    assert validate_reduced(f.w, f.ell) is None
    assert sum(wi * li for wi, li in zip(f.w, f.ell)) == 0
    assert f.w[0] == -1


def test_discretize_empty_cell():
    samples = [F(-1)] * 10 + [F(1)] * 10
    with pytest.raises(EmptyCellError):
        discretize(samples, 5)  # middle cells empty


def test_discretize_constant():
    with pytest.raises(ConstantForcingError):
        discretize([F(1)] * 10, 2)


def test_parse_forcing_grammar():
    assert isinstance(parse_forcing("sine"), SineForcing)
    assert parse_forcing("triangle:1/2") == triangle_forcing(F(1, 2))
    f = parse_forcing("pl:w=-1,4/3;l=4/7,3/7")
    assert f.w == (F(-1), F(4, 3))
    assert f.ell == (F(4, 7), F(3, 7))
    with pytest.raises(ValueError):
        parse_forcing("square:1/2")
    with pytest.raises(ValueError):
        parse_forcing("pl:w=-1,1")


def test_solve_lengths():
    # k=3: one free length
    ell = solve_lengths((F(-1), F(1), F(2)), [F(3, 5)])
    assert ell is not None
    w = (F(-1), F(1), F(2))
    assert sum(ell) == 1
    assert sum(wi * li for wi, li in zip(w, ell)) == 0
    # infeasible free choice -> None
    assert solve_lengths((F(-1), F(1), F(2)), [F(99, 100)]) is None


def test_random_reduced_forcing_valid():
    rng = random.Random(42)
    for _ in range(20):
        f = random_reduced_forcing(3, rng)
        assert validate_reduced(f.w, f.ell) is None
