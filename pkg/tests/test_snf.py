import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyprime import snf
from polyprime.arith import InvalidArgument
from polyprime.snf import AbGroup


def test_abgroup_str():
    assert str(AbGroup(invariant_factors=(), free_rank=0)) == "1"
    assert str(AbGroup(invariant_factors=(6,), free_rank=0)) == "Z/6"
    assert str(AbGroup(invariant_factors=(2, 6), free_rank=1)) == "Z/2 + Z/6 + Z"


def test_abgroup_order():
    assert AbGroup(invariant_factors=(3, 9), free_rank=0).order() == 27
    assert AbGroup(invariant_factors=(), free_rank=0).is_trivial()


def test_invariant_factor_chain():
    grp = snf.cokernel([[4, 0, 0], [0, 6, 0], [0, 0, 10]], 3)
    factors = grp.invariant_factors
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0


def test_cokernel_examples():
    assert snf.cokernel([[2, 0], [0, 3]], 2).invariant_factors == (6,)
    grp = snf.cokernel([[2, 0, 0], [0, 3, 0]], 3)
    assert grp.invariant_factors == (6,) and grp.free_rank == 1
    assert snf.cokernel([[1, 0], [0, 1]], 2).is_trivial()


def test_smith_vs_minor_gcd_random():
    rng = random.Random(7)
    for _ in range(300):
        rows = rng.randrange(1, 6)
        cols = rng.randrange(1, 6)
        mat = [[rng.randrange(-9, 10) for _ in range(cols)]
               for _ in range(rows)]
        assert snf.smith_normal_form(mat) == snf.snf_minor_gcd_oracle(mat)


@given(st.lists(st.lists(st.integers(min_value=-9, max_value=9),
                         min_size=5, max_size=5),
                min_size=5, max_size=5))
@settings(max_examples=100, deadline=None)
def test_smith_vs_minor_gcd_hypothesis(mat):
    assert snf.smith_normal_form(mat) == snf.snf_minor_gcd_oracle(mat)


def test_integer_rank():
    assert snf.integer_rank([[1, 2], [2, 4]]) == 1
    assert snf.integer_rank([[1, 0], [0, 1]]) == 2


def test_in_lattice_span():
    basis = [[2, 0], [0, 2]]
    assert snf.in_lattice_span(basis, [4, 6])
    assert not snf.in_lattice_span(basis, [1, 0])
