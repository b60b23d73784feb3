"""Multiplicative structure of tuples of positive rationals.

Rationals live as signed prime-exponent vectors; from those we derive the
largest perfect-power exponent m_x, its root x-hat, the 2-adic valuation
c_x, independence tests via exact integer rank and lattice saturation, and
the 2-torsion group V indexing Kummer kernel corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, snf
from .arith import InvalidArgument


@dataclass(frozen=True)
class ExpVec:
    """A positive rational as (prime, nonzero exponent) pairs, primes ascending."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last = 1
        for p, e in self.entries:
            if p <= last or e == 0:
                raise InvalidArgument(f"malformed exponent vector {self.entries}")
            last = p

    def as_fraction(self) -> Fraction:
        num = den = 1
        for p, e in self.entries:
            if e > 0:
                num *= p ** e
            else:
                den *= p ** (-e)
        return Fraction(num, den)

    def is_one(self) -> bool:
        return not self.entries

    def __mul__(self, other: "ExpVec") -> "ExpVec":
        d = dict(self.entries)
        for p, e in other.entries:
            d[p] = d.get(p, 0) + e
        return ExpVec(tuple(sorted((p, e) for p, e in d.items() if e)))

    def pow(self, k: int) -> "ExpVec":
        if k == 0:
            return ExpVec(())
        return ExpVec(tuple((p, e * k) for p, e in self.entries))


@dataclass(frozen=True)
class PowerData:
    """m_x, x-hat and c_x = ord_2(m_x) for a rational x != 1."""

    m: int
    hat: ExpVec
    c: int


def exponent_vector(numerator: int, denominator: int = 1) -> ExpVec:
    if numerator < 1 or denominator < 1:
        raise InvalidArgument("positive numerator and denominator required")
    frac = Fraction(numerator, denominator)
    d: dict[int, int] = {}
    for p, e in arith.factorize(frac.numerator).entries:
        d[p] = e
    for p, e in arith.factorize(frac.denominator).entries:
        d[p] = d.get(p, 0) - e
    return ExpVec(tuple(sorted((p, e) for p, e in d.items() if e)))


def from_fraction(x: Fraction | int) -> ExpVec:
    x = Fraction(x)
    return exponent_vector(x.numerator, x.denominator)


def power_data(x: ExpVec) -> PowerData:
    if x.is_one():
        raise InvalidArgument("m_x is undefined for x = 1")
    m = 0
    for _, e in x.entries:
        m = math.gcd(m, abs(e))
    hat = ExpVec(tuple((p, e // m) for p, e in x.entries))
    c = (m & -m).bit_length() - 1
    return PowerData(m=m, hat=hat, c=c)


def _exponent_matrix(xs: list[ExpVec]) -> list[list[int]]:
    primes = sorted({p for x in xs for p, _ in x.entries})
    col = {p: k for k, p in enumerate(primes)}
    mat = [[0] * len(primes) for _ in xs]
    for r, x in enumerate(xs):
        for p, e in x.entries:
            mat[r][col[p]] = e
    return mat


def is_mult_independent(xs: list[ExpVec]) -> bool:
    """Full integer rank of the exponent matrix."""
    if not xs:
        raise InvalidArgument("nonempty list required")
    if any(x.is_one() for x in xs):
        return False
    return snf.integer_rank(_exponent_matrix(xs)) == len(xs)


def strong_independence(xs: list[ExpVec]) -> bool:
    """Saturation of the hat lattice: all invariant factors equal 1."""
    if not is_mult_independent(xs):
        raise InvalidArgument("inputs are multiplicatively dependent")
    hats = [power_data(x).hat for x in xs]
    return all(d == 1 for d in snf.smith_normal_form(_exponent_matrix(hats)))


@dataclass(frozen=True)
class VElement:
    """One element of V = <hats> mod squares: its basis mask, squarefree
    representative, the 2-power exponent C_x, and disc = Delta(x-hat)."""

    mask: int
    rep: ExpVec
    C: int
    disc: int

    def has_a(self) -> bool:
        return bool(self.mask & 1)


@dataclass(frozen=True)
class ArtinInput:
    """Validated density input (a, b_1, ..., b_nu) with torsion data."""

    a: ExpVec
    bs: tuple[ExpVec, ...]
    power_a: PowerData
    power_bs: tuple[PowerData, ...]
    torsion_ok: bool

    @property
    def nu(self) -> int:
        return len(self.bs)

    def torsion_orders(self) -> tuple[int, ...]:
        return (self.power_a.m,) + tuple(pd.m for pd in self.power_bs)


def _coerce(x) -> ExpVec:
    return x if isinstance(x, ExpVec) else from_fraction(Fraction(x))


def artin_input(a, bs) -> ArtinInput:
    a = _coerce(a)
    bs = [_coerce(b) for b in bs]
    if a.is_one() or any(b.is_one() for b in bs):
        raise InvalidArgument("all inputs must differ from 1")
    if not bs:
        raise InvalidArgument("at least one b is required")
    if not is_mult_independent([a] + list(bs)):
        raise InvalidArgument("inputs are multiplicatively dependent")
    strong = strong_independence([a] + list(bs))
    return ArtinInput(
        a=a,
        bs=tuple(bs),
        power_a=power_data(a),
        power_bs=tuple(power_data(b) for b in bs),
        torsion_ok=strong,
    )


def build_v_group(inp: ArtinInput) -> list[VElement]:
    """All 2^(nu+1) elements of V over the basis (a-hat, b-hats).

    Bit 0 of the mask selects a-hat; bit h selects b-hat_h.  C is the max of
    c_{b_h}+1 over selected b's (0 when none are selected).
    """
    if not inp.torsion_ok:
        raise InvalidArgument("strong multiplicative independence required")
    hats = [inp.power_a.hat] + [pd.hat for pd in inp.power_bs]
    cs = [pd.c for pd in inp.power_bs]
    out = []
    for mask in range(1 << (inp.nu + 1)):
        rep = ExpVec(())
        C = 0
        for bit in range(inp.nu + 1):
            if mask >> bit & 1:
                rep = rep * hats[bit]
                if bit >= 1:
                    C = max(C, cs[bit - 1] + 1)
        disc = arith.quad_discriminant(rep.as_fraction())
        out.append(VElement(mask=mask, rep=rep, C=C, disc=disc))
    return out
