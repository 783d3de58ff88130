import pytest

from sl2lab.errors import NotAUnitError, ParseError
from sl2lab.finring import parse_ring_spec
from sl2lab.sl2 import (Mat2, comm, conj, parse_matrix, parse_matrix_list,
                        selfrep_shift_check)


def ring(spec):
    return parse_ring_spec(spec)


def entries(m: Mat2):
    return (m.a, m.b, m.c, m.d)


# -- constructors -------------------------------------------------------------

def test_selfrep_at_zero_is_identity():
    r = ring("Z/9")
    assert Mat2.selfrep(r, 0) == Mat2.identity(r)


def test_selfrep_entries_over_z4():
    r = ring("Z/4")
    c1 = Mat2.selfrep(r, 1)
    assert entries(c1) == (1, 1, 1, 2)
    assert c1 == Mat2.e21(r, 1) * Mat2.e12(r, 1)


def test_h_over_z4():
    r = ring("Z/4")
    assert entries(Mat2.h(r, 3)) == (3, 0, 0, 3)
    with pytest.raises(NotAUnitError):
        Mat2.h(r, 2)


def test_scalar_requires_square_one():
    r = ring("F5")
    assert Mat2.scalar(r, 4) == Mat2.from_entries(r, 4, 0, 0, 4)
    with pytest.raises(NotAUnitError):
        Mat2.scalar(r, 2)


def test_from_entries_checks_det():
    r = ring("Z/4")
    with pytest.raises(ValueError):
        Mat2.from_entries(r, 1, 0, 0, 2)


# -- products, inverses, conjugation -----------------------------------------

def test_elementary_addition_rule():
    r = ring("Z/6")
    for x in r.elements():
        for y in r.elements():
            assert Mat2.e12(r, x) * Mat2.e12(r, y) == \
                Mat2.e12(r, int(r.add(x, y)))


def test_inverse_of_selfrep_over_f3():
    r = ring("F3")
    c1 = Mat2.selfrep(r, 1)
    assert entries(c1.inv()) == (2, 2, 2, 1)
    assert c1 * c1.inv() == Mat2.identity(r)


def test_identity_is_neutral():
    r = ring("Z/9")
    a = Mat2.selfrep(r, 5)
    assert a * Mat2.identity(r) == a
    assert conj(a, Mat2.identity(r)) == a


def test_weyl_conjugation_swaps_elementaries():
    # W E12(x) W^-1 = E21(x) for W = [[0,1],[-1,0]], i.e. conj by W^-1
    for spec in ("Z/9", "F5", "F2[T]/(T^2)"):
        r = ring(spec)
        w = Mat2.from_entries(r, r.zero, r.one, r.neg(r.one), r.zero)
        for x in r.elements():
            assert conj(Mat2.e12(r, x), w.inv()) == Mat2.e21(r, x)
            assert conj(Mat2.e12(r, x), w) == Mat2.e21(r, int(r.neg(x)))


def test_conj_matches_three_product_oracle():
    r = ring("Z/9")
    a = Mat2.e12(r, 1)
    b = Mat2.e21(r, 1)
    assert conj(a, b) == b.inv() * a * b
    assert entries(conj(a, b)) == (2, 1, 8, 0)


def test_comm_identity_h_e12():
    r = ring("F5")
    got = comm(Mat2.h(r, 2), Mat2.e12(r, 1))
    assert got == Mat2.e12(r, 3)  # (u^2 - 1) a = 3


def test_comm_self_is_identity():
    r = ring("Z/4")
    a = Mat2.selfrep(r, 3)
    assert comm(a, a) == Mat2.identity(r)


def test_comm_matches_product_oracle():
    r = ring("F3")
    a, b = Mat2.e12(r, 1), Mat2.e21(r, 1)
    assert comm(a, b) == a * b * a.inv() * b.inv()


def test_pow():
    r = ring("F3")
    a = Mat2.e12(r, 1)
    assert a**3 == Mat2.identity(r)
    assert a**-1 == a.inv()


# -- level ideal and rho ------------------------------------------------------

def test_level_ideal_examples():
    r = ring("Z/4")
    assert Mat2.identity(r).level_ideal().is_zero()
    r12 = ring("Z/12")
    for x in r12.elements():
        assert Mat2.e12(r12, x).level_ideal().exps == r12.ideal([x]).exps
    assert Mat2.selfrep(r, 1).level_ideal().is_whole()


def test_rho_examples():
    r = ring("Z/9")
    assert Mat2.identity(r).rho() == 0
    for x in r.elements():
        fam = Mat2.e12(r, x).rho_family()
        assert fam[0] == x and fam[1] == 0
    assert Mat2.h(r, 2).rho() == 3


def test_rho_family_against_definition():
    r = ring("Z/6")
    for x in (1, 2, 5):
        m = Mat2.selfrep(r, r.from_int(x)) * Mat2.e21(r, r.from_int(2))
        assert m.rho_family() == (m.rho(), m.transpose().rho(),
                                  m.inv().rho(), m.inv().transpose().rho())


# -- identity suites ----------------------------------------------------------

@pytest.mark.parametrize("spec", ["Z/9", "F3", "Z/4", "F2[T]/(T^2)"])
def test_selfrep_shift_exhaustive(spec):
    r = ring(spec)
    assert all(selfrep_shift_check(r, x, y)
               for x in r.elements() for y in r.elements())


@pytest.mark.parametrize("spec", ["Z/9", "F5", "F2[T]/(T^2)"])
def test_selfrep_inverse_identity(spec):
    # C(x)^-1 = C(-x) conjugated by E12(-x)
    r = ring(spec)
    for x in r.elements():
        nx = int(r.neg(x))
        assert Mat2.selfrep(r, x).inv() == \
            conj(Mat2.selfrep(r, nx), Mat2.e12(r, nx))


def test_level_ideal_conjugation_invariant():
    from sl2lab.groups import enumerate_sl2
    for spec in ("Z/4", "F2[T]/(T^2)"):
        g = enumerate_sl2(ring(spec))
        mats = [g.mat(i) for i in range(g.size)]
        for a in mats:
            la = a.level_ideal().exps
            assert all(conj(a, b).level_ideal().exps == la for b in mats)


def test_dense_id_roundtrip():
    r = ring("Z/6")
    m = Mat2.e21(r, r.from_int(5))
    assert Mat2.from_dense_id(r, m.dense_id()) == m


# -- text ---------------------------------------------------------------------

def test_str_and_json():
    r = ring("Z/4")
    m = Mat2.selfrep(r, 1)
    assert str(m) == "[[1,1],[1,2]]"
    assert m.to_json()["ring_spec"] == "Z/4"


def test_parse_matrix_forms():
    r = ring("Z/4")
    assert parse_matrix("E12(3)", r) == Mat2.e12(r, 3)
    assert parse_matrix("E21(2)", r) == Mat2.e21(r, 2)
    assert parse_matrix("h(3)", r) == Mat2.h(r, 3)
    assert parse_matrix("C(1)", r) == Mat2.selfrep(r, 1)
    assert parse_matrix("[[1,1],[1,2]]", r) == Mat2.selfrep(r, 1)
    rx = ring("F2[T]/(T^2) x F3")
    m = parse_matrix("E12((T,1))", rx)
    assert rx.element_str(m.b) == "(T,1)"
    mats = parse_matrix_list("E12(1), [[1,1],[1,2]], h(3)", r)
    assert len(mats) == 3


def test_parse_matrix_errors():
    r = ring("Z/4")
    with pytest.raises(ParseError):
        parse_matrix("[[1,0],[0,2]]", r)  # det != 1
    with pytest.raises(ParseError):
        parse_matrix("h(2)", r)  # not a unit
    with pytest.raises(ParseError):
        parse_matrix("E13(1)", r)
