"""Multivariable Artin densities.

Field degrees of the Kummer towers F_{i,j} = Q(zeta_ij, a^(1/ij), b_h^(1/i))
come from a closed formula: the naive degree i^(nu+1) j phi(ij) divided by
the degree loss t_{i,j} * #ker.  The exact density is assembled as a sum of
rational multiples of S^(nu) over divisor tuples and 2-torsion corrections;
a truncated version of the series sum mu(j)/[F_{i,j}:Q] is kept as a
validation oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import arith, ratmul, stephens
from .arith import InvalidArgument
from .ratmul import ArtinInput, VElement
from .stephens import StephensMultiple


class InternalInconsistency(ArithmeticError):
    """A closed formula produced a non-integral degree; signals a bug."""


@dataclass(frozen=True)
class DegreeData:
    i: int
    j: int
    naive: int
    t: int
    ker: int
    degree: int


@dataclass(frozen=True)
class DensityTerm:
    """One S_{m,n} contribution with its provenance."""

    block: int                      # 1 main, 2 a-coset, 3 b-only
    divisors: tuple[int, ...]       # (d, d_1, ..., d_nu)
    mask: int                       # V-element mask (0 for block 1)
    m: int
    n: int
    weight: int                     # phi(d) * prod phi(d_h)
    coeff: Fraction                 # weight * S_{m,n} coefficient


@dataclass(frozen=True)
class DensityResult:
    nu: int
    mode: str                       # "full" or "limit"
    terms: tuple[DensityTerm, ...]
    total: StephensMultiple
    numeric: float


def t_ij(inp: ArtinInput, i: int, j: int) -> int:
    """Degree-loss factor (ij, m_a) * prod_h (i, m_{b_h})."""
    out = math.gcd(i * j, inp.power_a.m)
    for pd in inp.power_bs:
        out *= math.gcd(i, pd.m)
    return out


def _v_split(inp: ArtinInput) -> tuple[list[VElement], list[VElement]]:
    """V elements split into the a-hat coset and the b-only subgroup
    (identity excluded from the latter)."""
    v = ratmul.build_v_group(inp)
    a_coset = [x for x in v if x.has_a()]
    b_only = [x for x in v if not x.has_a() and x.mask != 0]
    return a_coset, b_only


def kernel_size(inp: ArtinInput, i: int, j: int,
                variant_plus1: bool = False) -> int:
    """Size of the Kummer kernel at level (i, j); always a power of 2.

    An a-coset element x contributes when 2^{C_x} | i, 2^{c_a+1} | ij and
    disc(x) | ij; a b-only element when 2^{C_x} | i and disc(x) | ij.
    `variant_plus1` tightens the first condition to 2^{C_x + 1} | i (an
    alternative reading rejected by the empirical sieve; kept only for
    comparison runs).
    """
    if not inp.torsion_ok:
        raise InvalidArgument("strong multiplicative independence required")
    shift = 1 if variant_plus1 else 0
    ij = i * j
    two_ca1 = 1 << (inp.power_a.c + 1)
    a_coset, b_only = _v_split(inp)
    ker = 1
    for x in a_coset:
        if i % (1 << (x.C + shift)) == 0 and ij % two_ca1 == 0 and ij % x.disc == 0:
            ker += 1
    for x in b_only:
        if i % (1 << (x.C + shift)) == 0 and ij % x.disc == 0:
            ker += 1
    return ker


def field_degree(inp: ArtinInput, i: int, j: int,
                 variant_plus1: bool = False) -> DegreeData:
    if i < 1 or j < 1:
        raise InvalidArgument("i, j >= 1 required")
    naive = i ** (inp.nu + 1) * j * arith.euler_phi(i * j)
    t = t_ij(inp, i, j)
    ker = kernel_size(inp, i, j, variant_plus1)
    loss = t * ker
    if naive % loss:
        raise InternalInconsistency(
            f"degree loss {loss} does not divide naive degree {naive} at ({i},{j})")
    return DegreeData(i=i, j=j, naive=naive, t=t, ker=ker, degree=naive // loss)


def _divisor_tuples(orders: tuple[int, ...]):
    tuples = [()]
    for m in orders:
        divs = arith.divisors(m)
        tuples = [t + (d,) for t in tuples for d in divs]
    return tuples


def _numeric(total: StephensMultiple, prime_bound: int) -> float:
    est = stephens.stephens_constant(total.nu, prime_bound)
    return total.numeric(est)


def density_exact(inp: ArtinInput, variant_plus1: bool = False,
                  prime_bound: int = 10 ** 6) -> DensityResult:
    """Exact GRH density of the prime set where every b_h lies in <a> mod p.

    Sum over divisor tuples (d | m_a, d_h | m_{b_h}) of phi(d) prod phi(d_h)
    times three blocks of S_{m,n} terms: the main term S_{[d_h], d}, one
    correction per a-coset element of V, and one per nontrivial b-only
    element.
    """
    if not inp.torsion_ok:
        raise InvalidArgument("strong multiplicative independence required")
    nu = inp.nu
    shift = 1 if variant_plus1 else 0
    two_ca1 = 1 << (inp.power_a.c + 1)
    a_coset, b_only = _v_split(inp)
    terms: list[DensityTerm] = []
    for tup in _divisor_tuples(inp.torsion_orders()):
        d, dhs = tup[0], tup[1:]
        weight = arith.euler_phi(d)
        for dh in dhs:
            weight *= arith.euler_phi(dh)
        lcm_dh = math.lcm(*dhs) if dhs else 1
        terms.append(_term(1, tup, 0, lcm_dh, d, weight, nu))
        for x in a_coset:
            m = math.lcm(1 << (x.C + shift), lcm_dh)
            n = math.lcm(two_ca1, d, x.disc)
            terms.append(_term(2, tup, x.mask, m, n, weight, nu))
        for x in b_only:
            m = math.lcm(1 << (x.C + shift), lcm_dh)
            n = math.lcm(d, x.disc)
            terms.append(_term(3, tup, x.mask, m, n, weight, nu))
    total = StephensMultiple(nu, sum((t.coeff for t in terms), Fraction(0)))
    return DensityResult(nu=nu, mode="full", terms=tuple(terms), total=total,
                         numeric=_numeric(total, prime_bound))


def _term(block, tup, mask, m, n, weight, nu) -> DensityTerm:
    coeff = weight * stephens.smn_coeff(nu, m, n)
    return DensityTerm(block=block, divisors=tup, mask=mask, m=m, n=n,
                       weight=weight, coeff=coeff)


def density_limit(nu: int, torsion_orders: tuple[int, ...],
                  prime_bound: int = 10 ** 6) -> DensityResult:
    """Large-discriminant limit: only the main block survives."""
    if len(torsion_orders) != nu + 1:
        raise InvalidArgument("need m_a plus nu torsion orders")
    if any(m < 1 for m in torsion_orders):
        raise InvalidArgument("torsion orders must be >= 1")
    terms = []
    for tup in _divisor_tuples(tuple(torsion_orders)):
        d, dhs = tup[0], tup[1:]
        weight = arith.euler_phi(d)
        for dh in dhs:
            weight *= arith.euler_phi(dh)
        lcm_dh = math.lcm(*dhs) if dhs else 1
        terms.append(_term(1, tup, 0, lcm_dh, d, weight, nu))
    total = StephensMultiple(nu, sum((t.coeff for t in terms), Fraction(0)))
    return DensityResult(nu=nu, mode="limit", terms=tuple(terms), total=total,
                         numeric=_numeric(total, prime_bound))


def density_series_oracle(inp: ArtinInput, i_max: int, j_max: int,
                          variant_plus1: bool = False) -> float:
    """Truncated sum over i <= i_max, j <= j_max of mu(j)/[F_{i,j}:Q]."""
    if not inp.torsion_ok:
        raise InvalidArgument("strong multiplicative independence required")
    mob, phi = stephens._mobius_phi_tables(i_max * j_max)
    nu = inp.nu
    shift = 1 if variant_plus1 else 0
    two_ca1 = 1 << (inp.power_a.c + 1)
    a_coset, b_only = _v_split(inp)
    m_a = inp.power_a.m
    m_bs = [pd.m for pd in inp.power_bs]
    total = 0.0
    for i in range(1, i_max + 1):
        ti = 1
        for mb in m_bs:
            ti *= math.gcd(i, mb)
        iw = 1.0 / float(i) ** (nu + 1)
        for j in range(1, j_max + 1):
            mu = int(mob[j])
            if mu == 0:
                continue
            ij = i * j
            t = math.gcd(ij, m_a) * ti
            ker = 1
            for x in a_coset:
                if i % (1 << (x.C + shift)) == 0 and ij % two_ca1 == 0 \
                        and ij % x.disc == 0:
                    ker += 1
            for x in b_only:
                if i % (1 << (x.C + shift)) == 0 and ij % x.disc == 0:
                    ker += 1
            total += mu * t * ker * iw / (j * float(phi[ij]))
    return total
