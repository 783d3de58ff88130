import numpy as np
import pytest

from sl2lab.errors import CapExceeded, NotAUnitError, ParseError
from sl2lab.finring import (FiniteRing, parse_ring_spec, poly_str,
                            smallest_irreducible, squarefree)

AXIOM_RINGS = ["F2", "F3", "F4", "F5", "Z/4", "Z/6", "Z/9", "Z/12",
               "F2[T]/(T^2)", "F2[T]/(T^2) x F3", "F3[T]/(T^2)"]


def ring(spec, cap=64):
    return parse_ring_spec(spec, cap)


# -- parsing ------------------------------------------------------------------

def test_parse_prime_power():
    r = ring("Z/4")
    assert r.order == 4
    assert [f.key for f in r.factors] == [("int", 2, 2)]


def test_parse_dual_numbers():
    r = ring("F2[T]/(T^2)")
    assert r.order == 4
    assert len(r.units()) == 2
    assert r.factors[0].nil == 2


def test_parse_crt():
    r = ring("Z/6")
    assert r.order == 6
    assert [f.key for f in r.factors] == [("int", 2, 1), ("int", 3, 1)]


def test_parse_canonicalizes_equivalent_specs():
    assert ring("Z/6") is ring("Z/2 x Z/3")
    assert ring("Z/6") is ring("Z/3 x Z/2")
    assert ring("F2") is ring("Z/2")


def test_parse_field_uses_smallest_irreducible():
    r = ring("F4")
    assert r.factors[0].g == (1, 1, 1)  # 1 + T + T^2
    assert poly_str(smallest_irreducible(3, 2)) == "1+T+T^3"


def test_parse_reducible_poly_modulus_is_split():
    # T^2 + T = T(T+1) over F2, so the quotient is F2 x F2
    r = ring("F2[T]/(T^2+T)")
    assert r.order == 4
    assert [f.key for f in r.factors] == [("int", 2, 1), ("int", 2, 1)]


def test_parse_squared_linear_factor_keeps_nilpotents():
    # T^2 + 1 = (T+1)^2 over F2
    r = ring("F2[T]/(T^2+1)")
    assert r.factors[0].nil == 2
    assert r.factors[0].residue_order == 2


def test_parse_errors():
    with pytest.raises(ParseError):
        ring("F6")
    with pytest.raises(ParseError):
        ring("Z/1")
    with pytest.raises(ParseError):
        ring("Q/4")
    with pytest.raises(ParseError):
        ring("F4[T]/(T^2)")  # coefficient field must be prime
    with pytest.raises(ParseError):
        ring("F2[T]/(1)")


def test_order_cap():
    with pytest.raises(CapExceeded):
        ring("Z/128")
    assert ring("Z/128", cap=128).order == 128


# -- arithmetic ---------------------------------------------------------------

def test_inverse_examples():
    r = ring("Z/4")
    assert r.inv(3) == 3
    with pytest.raises(NotAUnitError):
        r.inv(2)


def test_dual_number_square():
    r = ring("F2[T]/(T^2)")
    x = r.parse_element("1+T")
    assert r.element_str(r.mul(x, x)) == "1"


def test_crt_integer_arithmetic():
    r = ring("Z/6")
    total = r.add(r.from_int(4), r.from_int(5))
    assert r.element_str(total) == "3"


@pytest.mark.parametrize("spec", AXIOM_RINGS)
def test_ring_axioms_exhaustive(spec):
    r = ring(spec)
    n = r.order
    xs = np.arange(n)
    add, mul = r.add_table, r.mul_table
    assert np.array_equal(add, add.T)
    assert np.array_equal(mul, mul.T)
    assert np.array_equal(add[r.zero], xs)
    assert np.array_equal(mul[r.one], xs)
    # associativity and distributivity over the full cube
    grid = np.arange(n)
    a = grid[:, None, None]
    b = grid[None, :, None]
    c = grid[None, None, :]
    assert np.array_equal(add[add[a, b], c], add[a, add[b, c]])
    assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
    assert np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])
    assert r.one != r.zero


def test_units_examples():
    assert ring("Z/4").units() == [1, 3]
    r = ring("F2[T]/(T^2)")
    assert sorted(r.element_str(u) for u in r.units()) == ["1", "1+T"]
    assert ring("F5").units() == [1, 2, 3, 4]


# -- ideals -------------------------------------------------------------------

def test_maximal_ideals():
    assert [str(p) for p in ring("Z/4").maximal_ideals()] == ["(2)"]
    assert sorted(str(p) for p in ring("Z/6").maximal_ideals()) == ["(2)", "(3)"]
    assert [str(p) for p in ring("F2[T]/(T^2)").maximal_ideals()] == ["(T)"]


def test_ideal_from_generators_examples():
    r4 = ring("Z/4")
    assert r4.ideal([2]).exps == (1,)
    r6 = ring("Z/6")
    assert r6.ideal([r6.from_int(2)]).exps == (1, 0)
    assert r6.ideal([]).is_zero()


@pytest.mark.parametrize("spec", ["Z/12", "F2[T]/(T^2)", "Z/6", "F2[T]/(T^2) x F3"])
def test_ideal_equals_linear_combinations(spec):
    # brute-force oracle: the ideal generated by (g1, g2) is exactly the set
    # of r1*g1 + r2*g2 over all coefficient pairs
    r = ring(spec)
    rng = np.random.default_rng(7)
    for _ in range(10):
        g1, g2 = int(rng.integers(r.order)), int(rng.integers(r.order))
        combos = {int(r.add(r.mul(a, g1), r.mul(b, g2)))
                  for a in r.elements() for b in r.elements()}
        assert combos == set(r.ideal([g1, g2]).elements())


def test_ideal_algebra():
    r = ring("Z/12")
    two = r.ideal([r.from_int(2)])
    three = r.ideal([r.from_int(3)])
    assert two.plus(three).is_whole()
    assert two.times(three).exps == r.ideal([r.from_int(6)]).exps
    assert r.ideal([r.from_int(0)]).is_zero()


def test_quotient_examples():
    r4 = ring("Z/4")
    q, surj = r4.quotient_by(r4.ideal([2]))
    assert q.spec == "Z/2"
    rt = ring("F2[T]/(T^2)")
    q2, _ = rt.quotient_by(rt.maximal_ideals()[0])
    assert q2.order == 2
    r12 = ring("Z/12")
    q3, _ = r12.quotient_by(r12.ideal([r12.from_int(4)]))
    assert q3.spec == "Z/4"
    with pytest.raises(ParseError):
        r4.quotient_by(r4.whole_ideal())


@pytest.mark.parametrize("spec,gen", [("Z/12", 4), ("F2[T]/(T^2) x F3", None),
                                      ("Z/9", 3)])
def test_quotient_surjection_is_ring_hom(spec, gen):
    r = ring(spec)
    ideal = r.ideal([r.from_int(gen)]) if gen is not None else r.maximal_ideals()[0]
    q, surj = r.quotient_by(ideal)
    xs = np.arange(r.order)
    assert np.array_equal(surj[r.add_table[xs[:, None], xs[None, :]]],
                          q.add_table[surj[xs][:, None], surj[xs][None, :]])
    assert np.array_equal(surj[r.mul_table[xs[:, None], xs[None, :]]],
                          q.mul_table[surj[xs][:, None], surj[xs][None, :]])
    assert surj[r.one] == q.one


def test_vn2_examples():
    assert ring("F2").vn2().is_zero()
    assert ring("Z/4").vn2().exps == (1,)
    assert ring("F3").vn2().is_whole()


def test_additive_closure_examples():
    r6 = ring("Z/6")
    assert r6.additive_closure([r6.from_int(2)]).sorted() == \
        sorted([r6.from_int(0), r6.from_int(2), r6.from_int(4)])
    rt = ring("F2[T]/(T^2)")
    t = rt.parse_element("T")
    assert rt.additive_closure([t]).members == {0, t}
    sub = r6.additive_closure([r6.from_int(2)])
    assert sub.is_subgroup()


# -- ring predicates ----------------------------------------------------------

@pytest.mark.parametrize("spec", ["Z/4", "F2[T]/(T^2)", "Z/9", "Z/6"])
def test_stable_range_one(spec):
    assert ring(spec).has_stable_range_one()


def test_many_units():
    assert ring("Z/9").has_many_units()
    assert not ring("Z/4").has_many_units()
    assert not ring("F2[T]/(T^2)").has_many_units()


def test_squarefree():
    assert squarefree(30) and squarefree(1)
    assert not squarefree(12) and not squarefree(9)


# -- serialization ------------------------------------------------------------

def test_ring_json():
    doc = ring("F2[T]/(T^2) x F3").to_json()
    assert doc["order"] == 12
    assert doc["units_count"] == 4
    assert {f["kind"] for f in doc["factors"]} == {"poly", "int"}


def test_element_text_roundtrip():
    for spec in AXIOM_RINGS:
        r = ring(spec)
        for x in r.elements():
            assert r.parse_element(r.element_str(x)) == x
