from fractions import Fraction

import pytest

from polyprime import polyhedral
from polyprime.arith import InvalidArgument
from polyprime.snf import AbGroup


EDGES = [
    ("A1+A1+A1+A1+A1+A1+A1+A1", "D4+A1+A1+A1+A1", 14),
    ("A2+A2+A2+A2", "E6+A2", 4),
    ("A3+A3+A1+A1", "D5+A3", 2),
    ("A3+A3+A1+A1", "D6+A1+A1", 1),
    ("A4+A4", "E8", 1),
    ("A5+A2+A1", "E6+A2", 1),
    ("A5+A2+A1", "E7+A1", 1),
    ("A7+A1", "E7+A1", 1),
    ("A8", "E8", 1),
    ("D4+A1+A1+A1+A1", "D4+D4", 1),
    ("D4+A1+A1+A1+A1", "D6+A1+A1", 6),
    ("D4+D4", "D8", 3),
    ("D5+A3", "D8", 1),
    ("D6+A1+A1", "D8", 1),
    ("D6+A1+A1", "E7+A1", 2),
    ("D8", "E8", 1),
    ("E6+A2", "E8", 1),
    ("E7+A1", "E8", 1),
]


def _grp(*factors):
    return AbGroup(invariant_factors=factors, free_rank=0)


def test_delta_lambda_values():
    assert polyhedral.delta_lambda(_grp()).coeff == 1
    assert polyhedral.delta_lambda(_grp(3)).coeff == Fraction(18454, 18453)
    d9 = polyhedral.delta_lambda(_grp(9)).coeff
    assert d9 == Fraction(363230083, 363210399)
    assert polyhedral.delta_lambda(_grp(6)).coeff == Fraction(3164861, 3155463)


def test_delta_lambda_validation():
    with pytest.raises(InvalidArgument):
        polyhedral.delta_lambda(AbGroup(invariant_factors=(), free_rank=1))
    with pytest.raises(InvalidArgument):
        polyhedral.delta_lambda(_grp(*([2] * 9)))


def test_containment_edges(enum):
    assert polyhedral.containment_edges(enum) == EDGES


def test_deltabar_table(enum):
    rows = polyhedral.deltabar_all(enum)
    by_key = {(r.type_label, r.quotient.invariant_factors): r for r in rows}
    assert len(rows) == 19
    assert sum(r.count for r in rows) == 132462

    zero_keys = [
        ("D6+A1+A1", (2, 6)),
        ("D4+D4", (2, 6)),
        ("A3+A3+A1+A1", (2, 12)),
        ("A2+A2+A2+A2", (3, 9)),
        ("A2+A2+A2+A2", (3, 3, 3)),
        ("D4+A1+A1+A1+A1", (2, 2, 6)),
        ("A1+A1+A1+A1+A1+A1+A1+A1", (2, 2, 2, 6)),
    ]
    for key in zero_keys:
        assert by_key[key].deltabar.coeff == 0

    assert by_key[("E8", (3,))].deltabar.coeff == Fraction(18454, 18453)
    assert by_key[("A8", (9,))].deltabar.coeff == Fraction(1, 363210399)
    assert by_key[("A8", (9,))].count == 645
    assert by_key[("A8", (3, 3))].count == 315
    assert by_key[("A8", (3, 3))].deltabar.coeff == Fraction(1, 6151)
    assert by_key[("D8", (6,))].deltabar.coeff == Fraction(9227, 3155463)
    assert by_key[("A5+A2+A1", (18,))].deltabar.coeff == \
        Fraction(1, 124217956458)
    assert by_key[("D6+A1+A1", (2, 6))].count == 3780

    for r in rows:
        assert abs(r.deltabar.coeff) < 2
        assert r.deltabar.coeff >= 0


def test_split_ratio_identities(enum):
    # the torsion-free fraction 27/40 propagates through the classes that
    # admit an order 9 quotient
    rows = polyhedral.deltabar_all(enum)
    by_key = {(r.type_label, r.quotient.invariant_factors): r for r in rows}
    r = Fraction(27, 40)
    assert by_key[("E6+A2", (9,))].count == 1120 * r
    assert by_key[("A5+A2+A1", (18,))].count == 40320 * r
    assert by_key[("A2+A2+A2+A2", (3, 9))].count == 11200 * Fraction(4, 3) * r
    assert by_key[("A8", (9,))].count == 960 * Fraction(43, 64)


def test_aggregate(enum):
    rows = polyhedral.deltabar_all(enum)
    agg, numeric = polyhedral.aggregate_density(rows, prime_bound=10 ** 5)
    assert agg.coeff == Fraction(45917201977683407, 23712195741520320)
    assert 1 < agg.coeff < Fraction(5, 2)
    assert abs(numeric - 0.726286) < 1e-3


def test_compare_paper_verdicts(enum):
    cmp = polyhedral.compare_paper(enum=enum, prime_bound=10 ** 5)
    verdicts = {(v.row.type_label, v.row.quotient.invariant_factors): v
                for v in cmp.rows}

    v = verdicts[("A8", (9,))]
    assert v.count_verdict.startswith("mismatch")
    assert v.value_verdict == "match"

    v = verdicts[("D6+A1+A1", (2, 6))]
    assert v.count_verdict.startswith("mismatch")
    assert "92160" in v.evidence

    v = verdicts[("E8", (3,))]
    assert v.value_verdict.startswith("mismatch")
    assert "favors computed" in v.evidence

    v = verdicts[("A5+A2+A1", (18,))]
    assert v.value_verdict.startswith("mismatch")
    assert "favors computed" in v.evidence

    assert verdicts[("D8", (6,))].value_verdict == "match"
    assert verdicts[("D8", (6,))].count_verdict == "match"
    absent = verdicts[("D4+A1+A1+A1+A1", (2, 2, 6))]
    assert absent.count_verdict == "absent from reference"

    assert cmp.reference_reproduction == cmp.reference_aggregate
    assert cmp.aggregate_verdict.startswith("mismatch")
    assert abs(cmp.reference_numeric - 0.72609882811) < 1e-5
