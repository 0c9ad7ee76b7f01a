from hypothesis import given, settings, strategies as st
import pytest
from sympy import QQ

from formalglue.errors import AmbientMismatch, BadField, ConstantTermPresent, NotStandardBasis, ParseError
from formalglue.poly import DS, Poly, field_from_label, parse_poly, poly_arith, prime_field
from formalglue.standard import (
    ideal_contains,
    leading_monomials,
    mora_normal_form,
    std_basis,
    syzygies,
    syzygies_of_generators,
)

V = ("x", "y")


def p(s, vars=V, dom=QQ):
    return parse_poly(s, vars, dom)


# ---- arithmetic

def test_difference_of_squares():
    assert poly_arith(p("x+y"), p("x-y"), "mul") == p("x^2-y^2")


def test_additive_identity():
    f = p("3*x^2*y - 1/2*y + 7")
    assert poly_arith(f, Poly.zero(V, QQ), "add") == f


def test_telescoping_product():
    assert poly_arith(p("1+x"), p("1-x+x^2-x^3"), "mul") == p("1-x^4")


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        poly_arith(p("x"), p("z", ("z",)), "add")


def test_terms_sorted_local_order():
    f = p("x^3 + 2 + y")
    assert list(f.terms) == [(0, 0), (0, 1), (3, 0)]
    assert str(f) == "2 + y + x^3"


def test_parse_forms():
    assert p("2x y") == p("2*x*y")
    assert p("x**2") == p("x^2")
    assert p("(x+y)^2") == p("x^2 + 2*x*y + y^2")
    assert p("x/2") == p("1/2*x")


def test_parse_errors_carry_column():
    with pytest.raises(ParseError) as e:
        p("x + * y")
    assert e.value.column == 5
    with pytest.raises(ParseError):
        p("x + w")


def test_prime_field_arithmetic():
    F7 = prime_field(7)
    f = p("3*x + 5", dom=F7)
    assert (f * 5) == p("x + 4", dom=F7)
    assert str(p("-x", dom=F7)) == "6*x"


def test_bad_field():
    with pytest.raises(BadField):
        prime_field(9)
    with pytest.raises(BadField):
        field_from_label("RR")
    assert field_from_label("F5") == prime_field(5)


def test_substitute_and_truncate():
    f = p("x*y + x^3")
    g = f.substitute([p("t", ("t",)), p("t^2", ("t",))])
    assert g == p("t^3 + t^3", ("t",))
    assert p("1 + x + x*y + x^3").truncate(2) == p("1 + x")


# ---- Mora normal form

def test_nf_no_divisible_leading_term():
    assert mora_normal_form(p("x^2"), [p("x*y")]) == p("x^2")


def test_nf_single_step():
    assert mora_normal_form(p("x^2*y + y^2"), [p("x*y")]) == p("y^2")


def test_nf_unit_factor():
    # x + x^2 = x(1 + x) with 1 + x a unit
    assert mora_normal_form(p("x"), [p("x + x^2")]).is_zero()


def test_leading_term_is_lowest_degree():
    assert p("x^2 + y^3 + x*y").leading_term(DS)[0] in ((2, 0), (1, 1))
    assert p("x + x^2").ecart() == 1


# ---- standard bases

def test_std_basis_constant_term():
    with pytest.raises(ConstantTermPresent):
        std_basis([p("1 + x")])


def test_std_basis_is_minimal_and_monic():
    G = std_basis([p("x*y"), p("x^2*y"), p("2*y^3")])
    assert sorted(leading_monomials(G)) == [(0, 3), (1, 1)]
    assert all(next(iter(g.terms.values())) == 1 for g in G)


def test_std_basis_local_phenomenon():
    # y - y^2 is y times a unit, so x - y^2 and y - y^2 give x, y
    G = std_basis([p("x - y^2"), p("y - y^2")])
    assert set(leading_monomials(G)) == {(1, 0), (0, 1)}
    assert ideal_contains(G, p("x")) and ideal_contains(G, p("y"))


def test_syzygies_koszul():
    assert syzygies([p("x"), p("y")]) == [(p("y"), p("-x"))]


def test_syzygies_single_generator():
    assert syzygies([p("x*y")]) == []


def test_syzygies_require_standard_basis():
    with pytest.raises(NotStandardBasis):
        syzygies([p("x^2 + y^3"), p("x*y")])


def test_general_syzygies_vanish():
    gens = [p("x^2"), p("x*y"), p("y^2 + x^3")]
    for s in syzygies_of_generators(gens):
        total = Poly.zero(V, QQ)
        for a, g in zip(s, gens):
            total = total + a * g
        assert total.is_zero()


# ---- properties

coeff = st.integers(-3, 3)
small_poly = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), coeff, max_size=5
).map(lambda d: Poly(V, QQ, {e: QQ(c) for e, c in d.items()}))


@given(small_poly, small_poly, small_poly)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f - f).is_zero()


IDEALS = [["x*y"], ["x^2", "x*y"], ["y^2 - x^3"], ["x + y^2", "x*y"]]


@given(st.sampled_from(IDEALS), small_poly, small_poly)
@settings(max_examples=60, deadline=None)
def test_combinations_reduce_to_zero(gens, a, b):
    G = [p(g) for g in gens]
    f = a * G[0] + b * G[-1]
    assert mora_normal_form(f, std_basis(G)).is_zero()
