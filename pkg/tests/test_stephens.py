from fractions import Fraction

import pytest
from mpmath import mp, mpf

from polyprime import stephens
from polyprime.arith import InvalidArgument
from polyprime.stephens import StephensMultiple


def test_constant_first_factor():
    # at prime bound 2 the product is the single p = 2 factor
    est = stephens.stephens_constant(8, 2)
    expected = Fraction(1) - Fraction(255, 1) * Fraction(2, 1023)
    assert expected == Fraction(171, 341)
    with mp.workdps(40):
        assert abs(est.value - mp.mpf(expected.numerator)
                   / expected.denominator) < 1e-15


def test_constant_monotone_certification():
    coarse = stephens.stephens_constant(1, 100)
    fine = stephens.stephens_constant(1, 10 ** 5)
    assert stephens.certified_digits(fine) > stephens.certified_digits(coarse)
    assert fine.tail_bound < coarse.tail_bound
    assert abs(coarse.value - fine.value) < coarse.tail_bound


def test_constant_validation():
    with pytest.raises(InvalidArgument):
        stephens.stephens_constant(0, 100)
    with pytest.raises(InvalidArgument):
        stephens.stephens_constant(1, 1)


def test_known_coefficients():
    assert stephens.smn_coeff(1, 2, 1) == Fraction(3, 10)
    assert stephens.smn_coeff(1, 2, 2) == Fraction(3, 10)
    assert stephens.ymn_coeff(1, 1, 2) == Fraction(-2, 5)
    assert stephens.ymn_coeff(1, 2, 1) == Fraction(3, 10)
    assert stephens.smn_coeff(8, 3, 1) == Fraction(1, 36906)
    assert stephens.smn_coeff(8, 2, 1) == Fraction(1, 342)
    assert stephens.smn_coeff(8, 6, 1) == Fraction(1, 12621852)


def test_dual_route_grid():
    # smn_coeff verifies the direct product against the Y identity and
    # raises on any disagreement
    for nu in (1, 2, 8):
        for m in range(1, 13):
            for n in range(1, 13):
                stephens.smn_coeff(nu, m, n)


def test_multiplicativity_of_coefficients():
    for nu in (1, 8):
        c6 = stephens.smn_coeff(nu, 6, 1)
        assert c6 == stephens.smn_coeff(nu, 2, 1) * stephens.smn_coeff(nu, 3, 1)


def test_multiple_arithmetic():
    a = StephensMultiple(1, Fraction(1, 2))
    b = StephensMultiple(1, Fraction(1, 3))
    assert (a + b).coeff == Fraction(5, 6)
    assert a.scale(4).coeff == 2
    with pytest.raises(InvalidArgument):
        a + StephensMultiple(2, Fraction(1))


def test_oracle_matches_closed_form():
    est = stephens.stephens_constant(1, 10 ** 5)
    s = float(est.value)
    for m, n in ((1, 1), (2, 1), (1, 2), (2, 3)):
        oracle = stephens.Y_mn_oracle(1, m, n, 1500, 400)
        closed = float(stephens.ymn_coeff(1, m, n)) * s
        assert abs(oracle - closed) < 2e-4
