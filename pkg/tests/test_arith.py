import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from polyprime import arith
from polyprime.arith import InvalidArgument


def test_sieve_prime_counts():
    table = arith.sieve_primes(10 ** 5)
    assert len(table.primes) == 9592
    assert table.primes[0] == 2 and table.primes[-1] == 99991


def test_sieve_matches_small_list():
    assert arith.sieve_primes(30).primes.tolist() == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_primorial():
    assert arith.sieve_primes(10).primorial() == 210


def test_is_prime_brute():
    for n in range(2, 2000):
        ref = all(n % d for d in range(2, int(math.isqrt(n)) + 1))
        assert arith.is_prime(n) == ref
    assert not arith.is_prime(1)
    assert not arith.is_prime(0)


@given(st.integers(min_value=2, max_value=10 ** 12))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(n):
    fm = arith.factorize(n)
    assert fm.n() == n
    for p, e in fm.entries:
        assert e >= 1 and arith.is_prime(p)


def test_divisors_and_phi():
    assert arith.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert arith.euler_phi(1) == 1
    assert arith.euler_phi(36) == 12
    for n in range(1, 200):
        assert arith.euler_phi(n) == sum(
            1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_mobius_small():
    values = [arith.mobius(n) for n in range(1, 11)]
    assert values == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_phi_n_values():
    assert sum(arith.phi_n(2, k) for k in range(1, 11)) == 312
    assert arith.phi_n(1, 10) == arith.euler_phi(10)


@given(st.integers(min_value=1, max_value=500),
       st.integers(min_value=1, max_value=500))
@settings(max_examples=150, deadline=None)
def test_phi_n_multiplicative(a, b):
    if math.gcd(a, b) == 1:
        assert arith.phi_n(2, a * b) == arith.phi_n(2, a) * arith.phi_n(2, b)


def test_phi_n_average_ratio():
    assert abs(arith.phi_n_average_ratio(2, 10 ** 4) - 1.0) < 0.02


def test_zeta_series():
    with mp.workdps(20):
        assert abs(arith.zeta_series(2) - mp.pi ** 2 / 6) < 1e-12
        assert abs(arith.zeta_series(3) - mp.zeta(3)) < 1e-12


def test_quad_discriminant_values():
    assert arith.quad_discriminant(2) == 8
    assert arith.quad_discriminant(3) == 12
    assert arith.quad_discriminant(5) == 5
    assert arith.quad_discriminant(6) == 24
    assert arith.quad_discriminant(1) == 1
    assert arith.quad_discriminant(Fraction(1, 2)) == 8


@given(st.integers(min_value=2, max_value=10 ** 6),
       st.integers(min_value=1, max_value=1000))
@settings(max_examples=150, deadline=None)
def test_quad_discriminant_square_class(x, k):
    assert arith.quad_discriminant(x) == arith.quad_discriminant(x * k * k)
    assert arith.quad_discriminant(Fraction(x)) == \
        arith.quad_discriminant(Fraction(x, k * k))


def test_squarefree_kernel():
    assert arith.squarefree_kernel(Fraction(8)) == 2
    assert arith.squarefree_kernel(Fraction(45)) == 5
    with pytest.raises(InvalidArgument):
        arith.squarefree_kernel(Fraction(-2))
