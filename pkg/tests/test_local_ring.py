from itertools import product

import pytest
from hypothesis import given, settings, strategies as st
from sympy import QQ

from formalglue.errors import AmbientMismatch, ConstantTermPresent, DuplicateVariable
from formalglue.local_ring import (
    LocalRingPresentation,
    depth,
    edim,
    invariants,
    is_regular,
    krull_dim,
    present,
    tower_map,
    truncate,
)
from formalglue.oracles import graded_ambient_betti
from formalglue.poly import parse_poly

# (vars, gens, edim, dim, depth); dim and depth checked against the oracles below
CORPUS = [
    ("xy", ["x*y"], 2, 1, 1),
    ("xy", ["x + y^2"], 1, 1, 1),
    ("x", ["x^2"], 1, 0, 0),
    ("xyz", [], 3, 3, 3),
    ("xy", [], 2, 2, 2),
    ("xy", ["x^2", "x*y"], 2, 1, 0),
    ("xyz", ["x*y", "x*z", "y*z"], 3, 1, 1),
    ("xy", ["y^2 - x^3"], 2, 1, 1),
    ("xyzw", ["x*z", "x*w", "y*z", "y*w"], 4, 2, 1),
]


def ring(vars, gens):
    return present(list(vars), gens)


def monomial_dim_oracle(n, lead):
    """Largest coordinate subspace avoiding every monomial support (brute force)."""
    best = 0
    for mask in product([0, 1], repeat=n):
        if all(any(e[i] and not mask[i] for i in range(n)) for e in lead):
            best = max(best, sum(mask))
    return best


@pytest.mark.parametrize("vars,gens,e,d,dp", CORPUS)
def test_invariants_table(vars, gens, e, d, dp):
    R = ring(vars, gens)
    inv = invariants(R)
    assert (inv.edim, inv.dim, inv.depth) == (e, d, dp)
    assert inv.regular == (d == e)
    assert depth(R) <= krull_dim(R) <= edim(R)


@pytest.mark.parametrize("vars,gens,e,d,dp", [c for c in CORPUS if all(len(g.split("+")) == 1 and "-" not in g for g in c[1])])
def test_dim_and_depth_against_oracles(vars, gens, e, d, dp):
    R = ring(vars, gens)
    lead = [next(iter(g.terms)) for g in R.ideal_gens]
    assert monomial_dim_oracle(len(vars), lead) == d
    betti = graded_ambient_betti(tuple(vars), list(R.ideal_gens), QQ)
    pd = max((i for i, b in enumerate(betti) if b), default=0)
    assert len(vars) - pd == dp


def test_is_regular_examples():
    assert is_regular(ring("xy", []))
    assert not is_regular(ring("xy", ["x*y"]))
    assert is_regular(ring("xy", ["x + y^2"]))


def test_presentation_validation():
    with pytest.raises(DuplicateVariable):
        present(["x", "x"])
    with pytest.raises(ConstantTermPresent):
        present(["x"], ["x + 1"])
    with pytest.raises(AmbientMismatch):
        present(["x"], [parse_poly("y", ("y",), QQ)])


def test_residue_field_presentation():
    k = present([])
    assert str(k) == "k" and k.is_field()
    assert invariants(k).dim == 0


def test_contains_and_reduce():
    R = ring("xy", ["x*y"])
    assert R.contains(R.poly("x^2*y + x*y^3"))
    assert not R.contains(R.poly("x^2"))
    assert R.reduce(R.poly("x^2*y + y^2")) == R.poly("y^2")


# ---- truncations

def standard_monomial_count(n, level, lead):
    """Count monomials of degree < level avoiding a monomial ideal (oracle)."""
    count = 0
    for e in product(range(level), repeat=n):
        if sum(e) < level and not any(all(a >= b for a, b in zip(e, g)) for g in lead):
            count += 1
    return count


def test_truncation_examples():
    node = ring("xy", ["x*y"])
    assert truncate(node, 2).dimension == 3
    T3 = truncate(node, 3)
    assert T3.dimension == 5
    assert set(T3.monomial_basis) == {(0, 0), (1, 0), (0, 1), (2, 0), (0, 2)}
    assert truncate(ring("x", []), 1).dimension == 1


@pytest.mark.parametrize("vars,gens", [("xy", ["x*y"]), ("xy", ["x^2", "x*y"]), ("xyz", ["x*y", "x*z", "y*z"])])
def test_truncation_dims_match_counting(vars, gens):
    R = ring(vars, gens)
    lead = [next(iter(g.terms)) for g in R.ideal_gens]
    dims = [truncate(R, n).dimension for n in range(1, 6)]
    assert dims == [standard_monomial_count(len(vars), n, lead) for n in range(1, 6)]
    assert dims == sorted(dims)


def test_artinian_truncations_stabilize():
    R = ring("xy", ["x^2", "y^2"])
    assert [truncate(R, n).dimension for n in range(1, 6)] == [1, 3, 4, 4, 4]


def test_structure_constants_multiply():
    R = ring("xy", ["y^2 - x^3"])
    T = truncate(R, 5)
    f, g = R.poly("1 + x + y"), R.poly("x - 2*y + x*y")
    assert T.multiply(T.coordinates(f), T.coordinates(g)) == T.coordinates((f * g).truncate(5))


def test_tower_compatibility():
    R = ring("xy", ["x*y + y^3"])
    upper, lower = truncate(R, 4), truncate(R, 2)
    M = tower_map(upper, lower)
    for g in R.variables():
        image = [sum((row[j] * c for j, c in enumerate(upper.coordinates(g))), QQ.zero) for row in M]
        assert tuple(image) == lower.coordinates(g)
    assert upper.is_multiplicative(lower, M)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2)), max_size=4),
       st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2)), max_size=4))
@settings(max_examples=40, deadline=None)
def test_truncation_is_a_ring_map(a, b):
    R = ring("xy", ["x*y", "x^3"])
    T = truncate(R, 4)
    from formalglue.poly import Poly
    f = Poly(R.ambient_vars, QQ, {(i, j): QQ(c) for i, j, c in a if c})
    g = Poly(R.ambient_vars, QQ, {(i, j): QQ(c) for i, j, c in b if c})
    assert T.multiply(T.coordinates(f), T.coordinates(g)) == T.coordinates(f * g)
