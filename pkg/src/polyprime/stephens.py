"""Generalized Stephens constants and the closed-form double sums.

S^(nu) is the Euler product over all primes of
    1 - ((p^nu - 1)/(p - 1)) * (p / (p^(nu+2) - 1)).
Values of the double sums Y_{m,n} and S_{m,n} are exact rational multiples
of S^(nu); a truncated version of the defining series serves as a
formula-independent numerical oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf

from . import _kernels, arith
from .arith import InvalidArgument


@dataclass(frozen=True)
class StephensMultiple:
    """An exact value coeff * S^(nu)."""

    nu: int
    coeff: Fraction

    def __add__(self, other: "StephensMultiple") -> "StephensMultiple":
        if self.nu != other.nu:
            raise InvalidArgument("cannot add multiples of different S^(nu)")
        return StephensMultiple(self.nu, self.coeff + other.coeff)

    def scale(self, k: Fraction | int) -> "StephensMultiple":
        return StephensMultiple(self.nu, self.coeff * k)

    def numeric(self, estimate: "ConstantEstimate") -> float:
        if estimate.nu != self.nu:
            raise InvalidArgument("estimate is for a different nu")
        return float(self.coeff.numerator) / float(self.coeff.denominator) * float(estimate.value)


@dataclass(frozen=True)
class ConstantEstimate:
    """Truncated Euler product with a rigorous tail bound:
    |S^(nu) - value| <= tail_bound."""

    nu: int
    prime_bound: int
    value: mpf
    tail_bound: mpf


_estimate_cache: dict[tuple[int, int], ConstantEstimate] = {}


def stephens_constant(nu: int, prime_bound: int) -> ConstantEstimate:
    """Euler product over primes <= prime_bound at 50-digit precision.

    Each factor is evaluated as an exact integer ratio
    ((p-1)(p^(nu+2)-1) - p(p^nu-1)) / ((p-1)(p^(nu+2)-1)) before the
    high-precision multiply.  The tail uses |log factor| <= 2/p^2 for the
    omitted primes, so sum_{p > B} 2/p^2 < sum_{n > B} 2/n^2 < 2/B.
    """
    if nu < 1 or prime_bound < 2:
        raise InvalidArgument("nu >= 1 and prime_bound >= 2 required")
    key = (nu, prime_bound)
    if key in _estimate_cache:
        return _estimate_cache[key]
    primes = arith.sieve_primes(prime_bound).primes
    with mp.workdps(50):
        value = mpf(1)
        # accumulate exact numerator/denominator in blocks to limit bigint size
        block_num = 1
        block_den = 1
        count = 0
        for p in primes:
            p = int(p)
            den = (p - 1) * (p ** (nu + 2) - 1)
            num = den - p * (p ** nu - 1)
            block_num *= num
            block_den *= den
            count += 1
            if count == 64:
                value *= mpf(block_num) / mpf(block_den)
                block_num = block_den = 1
                count = 0
        if count:
            value *= mpf(block_num) / mpf(block_den)
        tail = value * (mp.expm1(mpf(2) / prime_bound))
        est = ConstantEstimate(nu=nu, prime_bound=prime_bound,
                               value=+value, tail_bound=+abs(tail))
    _estimate_cache[key] = est
    return est


def certified_digits(est: ConstantEstimate) -> int:
    """Number of correct significant digits guaranteed by the tail bound."""
    if est.tail_bound == 0:
        return 50
    with mp.workdps(50):
        return max(0, int(mp.floor(-mp.log10(est.tail_bound / est.value))))


def _dp(p: int, nu: int) -> int:
    return p ** (nu + 3) - p ** (nu + 2) - p ** (nu + 1) + 1


def ymn_coeff(nu: int, m: int, n: int) -> Fraction:
    """Closed form for Y_{m,n} / S^(nu)."""
    if m < 1 or n < 1:
        raise InvalidArgument("m, n >= 1 required")
    coeff = Fraction(1, m ** (nu + 2) * n ** (nu + 2))
    n_primes = set(arith.factorize(n).primes())
    for p in n_primes:
        coeff *= Fraction(-(p ** (nu + 3)) * (p ** nu - 1), _dp(p, nu))
    for p in arith.factorize(m).primes():
        if p not in n_primes:
            coeff *= Fraction(p ** (nu + 1) * (p * p - 1), _dp(p, nu))
    return coeff


def Y_mn(nu: int, m: int, n: int) -> StephensMultiple:
    return StephensMultiple(nu, ymn_coeff(nu, m, n))


def smn_coeff(nu: int, m: int, n: int) -> Fraction:
    """Closed form for S_{m,n} / S^(nu), where S_{m,n} is the double sum
    over m | i and n | ij.

    Since m | i already forces gcd(m, n) | ij, the condition n | ij reduces
    to n/(m,n) | ij, so S_{m,n} = Y_{m, n/(m,n)} and the positive product
    runs over p | m with p not dividing n/(m,n).  (A product taken over
    p | m/(m,n) instead would drop factors for primes shared by m and n at
    equal multiplicity, e.g. S_{2,2}, and disagrees with the defining
    series; see the double-sum oracle tests.)

    Computed two ways, directly and via the Y identity; the routes must
    agree exactly.
    """
    if m < 1 or n < 1:
        raise InvalidArgument("m, n >= 1 required")
    g = math.gcd(m, n)
    lcm = m * n // g
    n_red = n // g
    direct = Fraction(1, lcm ** (nu + 2))
    red_primes = set(arith.factorize(n_red).primes())
    for p in red_primes:
        direct *= Fraction(-(p ** (nu + 3)) * (p ** nu - 1), _dp(p, nu))
    for p in arith.factorize(m).primes():
        if p not in red_primes:
            direct *= Fraction(p ** (nu + 1) * (p * p - 1), _dp(p, nu))
    via_y = ymn_coeff(nu, m, lcm // m)
    if direct != via_y:
        raise ArithmeticError(
            f"S_({m},{n}) routes disagree: {direct} vs {via_y}")
    return direct


def S_mn(nu: int, m: int, n: int) -> StephensMultiple:
    return StephensMultiple(nu, smn_coeff(nu, m, n))


_oracle_tables: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _mobius_phi_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """mobius[0..limit] and phi[0..limit] by linear sieves."""
    for have in _oracle_tables:
        if have >= limit:
            mob, phi = _oracle_tables[have]
            return mob, phi
    mob = np.ones(limit + 1, dtype=np.int64)
    phi = np.arange(limit + 1, dtype=np.int64)
    is_comp = np.zeros(limit + 1, dtype=bool)
    for p in range(2, limit + 1):
        if not is_comp[p]:
            is_comp[2 * p :: p] = True
            mob[p::p] *= -1
            mob[p * p :: p * p] = 0
            phi[p::p] -= phi[p::p] // p
    _oracle_tables.clear()
    _oracle_tables[limit] = (mob, phi)
    return mob, phi


def Y_mn_oracle(nu: int, m: int, n: int, i_max: int, j_max: int) -> float:
    """Truncated defining series: sum over i <= i_max with m | i and
    squarefree j <= j_max with mn | ij of mu(j) / (i^(nu+1) j phi(ij))."""
    if i_max < 1 or j_max < 1:
        raise InvalidArgument("truncation limits >= 1 required")
    mob, phi = _mobius_phi_tables(i_max * j_max)
    return _kernels.y_oracle(nu, m, n, i_max, j_max, mob, phi)
