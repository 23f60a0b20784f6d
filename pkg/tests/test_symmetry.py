import numpy as np
import pytest

from tnkit.symmetry import (Symmetry, as_qnum, combine_qnums, identity_qnum,
                            reverse_qnums, symmetry_from_str)


def test_u1_combine_and_reverse():
    u1 = Symmetry.u1()
    assert u1.combine(2, 3) == 5
    assert u1.reverse(2) == -2
    assert u1.reverse(0) == 0
    for q in range(-5, 6):
        assert u1.combine(q, 0) == q


def test_zn_combine_and_reverse():
    z3 = Symmetry.zn(3)
    assert z3.combine(2, 2) == 1
    assert z3.reverse(1) == 2
    assert z3.combine(1, z3.reverse(1)) == 0
    assert z3.reverse(0) == 0


def test_inverse_law_exhaustive():
    u1 = Symmetry.u1()
    rng = np.random.default_rng(1)
    for q in rng.integers(-1000, 1000, size=200):
        assert u1.combine(int(q), u1.reverse(int(q))) == 0
    for n in (2, 3, 5, 7):
        zn = Symmetry.zn(n)
        for q in range(n):
            assert zn.combine(q, zn.reverse(q)) == 0


def test_combine_associative_commutative():
    rng = np.random.default_rng(2)
    u1 = Symmetry.u1()
    for _ in range(100):
        a, b, c = (int(x) for x in rng.integers(-50, 50, size=3))
        assert u1.combine(a, b) == u1.combine(b, a)
        assert u1.combine(u1.combine(a, b), c) == u1.combine(a, u1.combine(b, c))
    for n in (2, 3, 4):
        zn = Symmetry.zn(n)
        for a in range(n):
            for b in range(n):
                assert zn.combine(a, b) == zn.combine(b, a)
                for c in range(n):
                    assert (zn.combine(zn.combine(a, b), c)
                            == zn.combine(a, zn.combine(b, c)))


def test_zn_requires_modulus_at_least_two():
    with pytest.raises(ValueError):
        Symmetry.zn(1)
    with pytest.raises(ValueError):
        Symmetry.zn(0)


def test_equality_is_kind_and_modulus():
    assert Symmetry.u1() == Symmetry.u1()
    assert Symmetry.zn(3) == Symmetry.zn(3)
    assert Symmetry.zn(3) != Symmetry.zn(4)
    assert Symmetry.u1() != Symmetry.zn(2)
    assert len({Symmetry.u1(), Symmetry.u1(), Symmetry.zn(2)}) == 2


def test_text_tags_round_trip():
    for sym in (Symmetry.u1(), Symmetry.zn(2), Symmetry.zn(3), Symmetry.zn(12)):
        assert symmetry_from_str(str(sym)) == sym
    assert str(Symmetry.u1()) == "U1"
    assert str(Symmetry.zn(3)) == "Z3"
    with pytest.raises(ValueError):
        symmetry_from_str("SU2")


def test_charge_tuples_normalize_componentwise():
    syms = [Symmetry.u1(), Symmetry.zn(3)]
    assert as_qnum((5, 5), syms) == (5, 2)
    assert as_qnum((-1, -1), syms) == (-1, 2)
    assert combine_qnums((1, 2), (2, 2), syms) == (3, 1)
    assert reverse_qnums((4, 1), syms) == (-4, 2)
    assert identity_qnum(syms) == (0, 0)
    with pytest.raises(ValueError):
        as_qnum((1,), syms)


def test_scalar_charge_needs_single_symmetry():
    assert as_qnum(7, [Symmetry.u1()]) == (7,)
    with pytest.raises(ValueError):
        as_qnum(7, [Symmetry.u1(), Symmetry.zn(2)])
