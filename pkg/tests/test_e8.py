from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from polyprime import e8
from polyprime.snf import AbGroup


def test_root_count_and_negation():
    sys = e8.build_root_system()
    assert len(sys.roots) == 240
    for r in range(240):
        assert (sys.roots[sys.neg_index[r]] == -sys.roots[r]).all()


def test_reflections_are_involutions():
    sys = e8.build_root_system()
    for i in range(8):
        perm = sys.reflection_perms[i]
        assert (perm[perm] == np.arange(240)).all()


def test_highest_root():
    coeffs = e8.highest_root_coeffs()
    assert int(coeffs.sum()) == 29
    assert sorted(int(c) for c in coeffs) == [2, 2, 3, 3, 4, 4, 5, 6]


def test_subsystem_closure_examples():
    assert e8.subsystem_closure((0,)).type_label == "A1"
    full = e8.subsystem_closure(tuple(range(8)))
    assert full.type_label == "E8" and full.root_count() == 240
    with pytest.raises(Exception):
        e8.subsystem_closure((0, 0))


def test_enumeration_totals(enum):
    assert len(enum.records) == 132462
    totals = enum.type_totals()
    assert totals["E8"] == 1
    assert totals["D8"] == 135
    assert totals["A8"] == 960
    assert totals["E7+A1"] == 120
    assert len(totals) == 15


def test_quotient_pi_examples():
    assert e8.quotient_pi(tuple(range(8))).invariant_factors == (3,)
    # rank-7 subsystems have a free rank 1 quotient with torsion () or (3,)
    rep = e8.subsystem_closure((0, 1, 2, 3, 4, 5, 7))
    grp = e8.quotient_pi(rep)
    assert grp.free_rank == 1
    assert grp.invariant_factors in ((), (3,))


def test_quotient_e8_examples(enum):
    full = e8.subsystem_closure(tuple(range(8)))
    assert e8.quotient_e8(full).is_trivial()
    wanted = {"A8": (3,), "D8": (2,), "E6+A2": (3,), "A5+A2+A1": (6,)}
    for rec in enum.records:
        expect = wanted.pop(rec.type_label, None)
        if expect is not None:
            assert e8.quotient_e8(rec.simple_roots).invariant_factors == expect
        if not wanted:
            break
    assert not wanted


def test_cache_roundtrip(tmp_path, enum):
    path = str(tmp_path / "cache.txt")
    e8._save_cache(path, enum)
    loaded = e8._load_cache(path)
    assert len(loaded.records) == len(enum.records)
    assert loaded.records[0] == enum.records[0]
    assert loaded.orbit_sizes == {
        k: v for k, v in enum.orbit_sizes.items() if v}
    # corrupt the digest line
    lines = open(path).read().splitlines()
    lines[1] = "digest " + "0" * 64
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    with pytest.raises(e8.CacheDigestError):
        e8._load_cache(path)


def test_weyl_orders():
    assert e8.weyl_order("A1") == 2
    assert e8.weyl_order("A8") == 362880
    assert e8.weyl_order("D8") == 2 ** 7 * 40320
    assert e8.weyl_order("E8") == e8.W_E8
    assert e8.weyl_order_product("E6+A2") == 51840 * 6


def test_oshima_counts():
    assert e8.oshima_count("A8", 1, 2) == 960
    assert e8.oshima_count("D8", 2, 2) == 135
    assert e8.oshima_count("E7+A1", 1, 1) == 120
    assert e8.oshima_count("E6+A2", 2, 4) == 1120
    assert e8.oshima_count("D6+A1+A1", 2, 4) == 3780
    assert e8.oshima_count("A2+A2+A2+A2", 8, 384) == 11200


def test_e6a1_z_ratio():
    assert e8.e6a1_z_ratio() == Fraction(27, 40)


def test_d8_sublattice_counts(enum):
    for rec in enum.records:
        if rec.type_label == "D8":
            sub = e8.subsystem_closure(rec.simple_roots)
            below = e8.sublattices(sub, enum)
            types = Counter(enum.records[i].type_label for i in below)
            assert types["D4+D4"] == 35
            break
