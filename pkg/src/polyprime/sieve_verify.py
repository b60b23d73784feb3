"""Formula-independent empirical verification by prime sieving.

For each prime p of good reduction we compute the index [F_p^* : <a mod p>]
and test whether every b_h lies in the subgroup generated by a, then
compare the observed hit rate against the predicted exact density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels, arith, artin
from .arith import InvalidArgument
from .ratmul import ArtinInput


@dataclass(frozen=True)
class VerifyReport:
    x_bound: int
    primes_tested: int
    primes_skipped: int
    hits: int
    empirical: float
    predicted: float
    abs_diff: float


def order_mod(a: Fraction | int, p: int) -> int:
    """Multiplicative order of a modulo p via factorization of p - 1."""
    a = Fraction(a)
    if a.numerator % p == 0 or a.denominator % p == 0:
        raise InvalidArgument(f"bad reduction of {a} at {p}")
    x = a.numerator % p * pow(a.denominator, -1, p) % p
    order = p - 1
    for q, _ in arith.factorize(p - 1).entries:
        while order % q == 0 and pow(x, order // q, p) == 1:
            order //= q
    return order


def in_subgroup(b: Fraction | int, a: Fraction | int, p: int) -> bool:
    """Membership of b in <a mod p>: the cyclic group F_p^* has a unique
    subgroup of each order, so b is in <a> iff b^ord(a) = 1."""
    b = Fraction(b)
    if b.numerator % p == 0 or b.denominator % p == 0:
        raise InvalidArgument(f"bad reduction of {b} at {p}")
    x = b.numerator % p * pow(b.denominator, -1, p) % p
    return pow(x, order_mod(a, p), p) == 1


_scan_cache: dict = {}


def _scan(inp: ArtinInput, x: int):
    """(primes, index, member) arrays for all odd primes <= x.

    index[k] = 0 marks bad reduction; otherwise the index of <a> in F_p^*.
    member[k] is True when every b lies in <a mod p>.
    """
    a = inp.a.as_fraction()
    bs = [b.as_fraction() for b in inp.bs]
    key = (a, tuple(bs), x)
    if key in _scan_cache:
        return _scan_cache[key]
    primes = arith.sieve_primes(x).primes
    primes = primes[primes > 2]
    spf = _kernels.smallest_prime_factor(x)
    index, member = _kernels.subgroup_scan(
        primes, spf, a.numerator, a.denominator,
        [b.numerator for b in bs], [b.denominator for b in bs])
    _scan_cache.clear()
    _scan_cache[key] = (primes, index, member)
    return primes, index, member


def count_N(inp: ArtinInput, x: int, i: int) -> int:
    """Primes p <= x of good reduction with [F_p^* : <a>] = i and all b's
    in <a mod p>."""
    _, index, member = _scan(inp, x)
    return int(((index == i) & member).sum())


def count_P(inp: ArtinInput, x: int, i: int, k: int) -> int:
    """Primes p <= x of good reduction where i | [F_p^* : <a>], every b is
    an i-th power residue, and a^((p-1)/(q i)) = 1 for all primes q | k."""
    if arith.mobius(k) == 0:
        raise InvalidArgument("k must be squarefree")
    primes, index, member = _scan(inp, x)
    a = inp.a.as_fraction()
    qs = [q for q, _ in arith.factorize(k).entries]
    count = 0
    for p, idx in zip(primes, index):
        p = int(p)
        if idx == 0 or (p - 1) % i:
            continue
        x_a = a.numerator % p * pow(a.denominator, -1, p) % p
        if pow(x_a, (p - 1) // i, p) != 1:
            continue
        ok = True
        for b in inp.bs:
            bf = b.as_fraction()
            x_b = bf.numerator % p * pow(bf.denominator, -1, p) % p
            if pow(x_b, (p - 1) // i, p) != 1:
                ok = False
                break
        if ok:
            for q in qs:
                if (p - 1) % (q * i) or pow(x_a, (p - 1) // (q * i), p) != 1:
                    ok = False
                    break
        if ok:
            count += 1
    return count


def empirical_density(inp: ArtinInput, x: int = 10 ** 6,
                      predicted: float | None = None) -> VerifyReport:
    """Observed density of primes <= x with all b's in <a>, versus the
    exact prediction (density_exact numeric by default)."""
    if not inp.torsion_ok:
        raise InvalidArgument("strong multiplicative independence required")
    primes, index, member = _scan(inp, x)
    good = index > 0
    tested = int(good.sum())
    hits = int((member & good).sum())
    if predicted is None:
        predicted = artin.density_exact(inp).numeric
    empirical = hits / tested
    return VerifyReport(
        x_bound=x, primes_tested=tested,
        primes_skipped=int(len(primes) + 1 - tested),  # +1 for p = 2
        hits=hits, empirical=empirical, predicted=predicted,
        abs_diff=abs(empirical - predicted))
