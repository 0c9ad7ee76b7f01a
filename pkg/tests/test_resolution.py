import pytest
from sympy import QQ

from formalglue.errors import NoPresentation, TruncationMismatch
from formalglue.fiber import fiber_over_k, fiber_truncated, SurjectionSpec
from formalglue.local_ring import edim, present
from formalglue.oracles import graded_ambient_betti, graded_residue_betti
from formalglue.resolution import (
    ModulePresentation,
    PoincareTruncation,
    betti_numbers,
    check_betti_inequality,
    check_domination,
    check_syzygy_recursion,
    compose_is_zero,
    is_minimal,
    minimal_resolution,
    poincare_residue_field,
    poincare_series,
    series_product,
)


def ring(vars, gens=()):
    return present(list(vars), list(gens))


def test_koszul_resolution():
    res = minimal_resolution(ModulePresentation.residue_field(ring("xy")), 5)
    assert res.betti == [1, 2, 1] and res.complete


def test_principal_ideal_over_ambient():
    A = ring("xy")
    res = minimal_resolution(ModulePresentation.cyclic(A, [A.poly("x*y")]), 4)
    assert res.betti == [1, 1] and res.complete


def test_ambient_resolution_matches_oracle():
    A = ring("xy")
    gens = [A.poly("x^2"), A.poly("x*y")]
    res = minimal_resolution(ModulePresentation.cyclic(A, gens), 4)
    assert res.complete
    assert tuple(res.betti_table(3).betti) == graded_ambient_betti(("x", "y"), gens, QQ) == (1, 2, 1, 0)


@pytest.mark.parametrize("vars,gens,expected", [
    ("x", [], (1, 1, 0, 0, 0, 0)),
    ("xy", ["x*y"], (1, 2, 2, 2, 2, 2)),
    ("xy", [], (1, 2, 1, 0, 0, 0)),
])
def test_poincare_examples(vars, gens, expected):
    assert poincare_residue_field(ring(vars, gens), 5).coefficients == expected


@pytest.mark.parametrize("vars,gens", [
    ("xy", ["x*y"]),
    ("xy", ["x^2", "x*y"]),
    ("xyz", ["x*y", "x*z", "y*z"]),
    ("xy", ["x^2", "y^2"]),
    ("xyz", ["x*z", "y*z"]),
])
def test_poincare_against_graded_oracle(vars, gens):
    R = ring(vars, gens)
    N = 4
    assert poincare_residue_field(R, N).coefficients == graded_residue_betti(tuple(vars), list(R.ideal_gens), QQ, N)


def test_resolution_invariants_node():
    R = ring("xy", ["x*y"])
    res = minimal_resolution(ModulePresentation.residue_field(R), 5)
    assert compose_is_zero(res)
    assert is_minimal(res)
    assert not res.complete and res.length_or_truncation == 5


def test_beta1_is_edim():
    for vars, gens in [("xy", ["x*y"]), ("xyz", ["x*y", "x + z^2"]), ("xy", ["y^2 - x^3"])]:
        R = ring(vars, gens)
        assert betti_numbers(ModulePresentation.residue_field(R), 1)[1] == edim(R)


def test_mu_of_presentation_with_units():
    R = ring("xy")
    M = ModulePresentation(R, 2, [(R.one(), R.poly("x")), (R.zero(), R.poly("y"))])
    assert M.mu() == 1
    assert betti_numbers(M, 2).betti == (1, 1, 0)


# ---- syzygy recursion

@pytest.mark.parametrize("vars,gens", [("x", []), ("xy", []), ("xy", ["x*y"])])
def test_syzygy_recursion_residue_field(vars, gens):
    rep = check_syzygy_recursion(ModulePresentation.residue_field(ring(vars, gens)), 5)
    assert rep.holds and rep.mu == 1


def test_syzygy_recursion_free_module():
    R = ring("xy", ["x*y"])
    rep = check_syzygy_recursion(ModulePresentation.free(R, 3), 3)
    assert rep.lhs == (3, 0, 0, 0) and rep.holds


# ---- domination

def T(*c):
    return PoincareTruncation(tuple(c), len(c) - 1)


def test_domination_examples():
    assert check_domination(T(1, 2, 2), T(1, 1, 0))
    assert not check_domination(T(1, 1), T(1, 2))
    node = poincare_residue_field(ring("xy", ["x*y"]), 3)
    plane = poincare_residue_field(ring("xy"), 3)
    assert check_domination(node, series_product(plane, T(1, 0, 0, 0)))
    with pytest.raises(TruncationMismatch):
        check_domination(T(1, 2), T(1, 2, 3))


def test_change_of_rings_bound_direction():
    # k[[y]] -> k[[y]]/(y^2): the change-of-rings spectral sequence bounds
    # P^R from above by P^R' * P^R_R'; the reverse inequality fails here.
    R, Rp = ring("y"), ring("y", ["y^2"])
    N = 5
    lhs = poincare_residue_field(R, N)
    rhs = series_product(poincare_residue_field(Rp, N), poincare_series(ModulePresentation.cyclic(R, [R.poly("y^2")]), N))
    assert lhs.coefficients == (1, 1, 0, 0, 0, 0)
    assert rhs.coefficients == (1, 2, 2, 2, 2, 2)
    assert check_domination(rhs, lhs) and not check_domination(lhs, rhs)


# ---- Betti inequalities for a glued chart

def test_betti_inequality_node_equality():
    fp = fiber_over_k(ring("x"), ring("y"))
    rep = check_betti_inequality(fp)
    assert (rep.beta1_fiber, rep.beta0_x, rep.beta1_y_of_z, rep.beta1_x) == (2, 1, 1, 1)
    assert rep.holds and rep.beta1_fiber == rep.beta0_x * rep.beta1_y_of_z + rep.beta1_x
    assert (rep.edim_fiber, rep.edim_x, rep.edim_holds) == (2, 1, True)


def test_betti_inequality_free_module():
    X = ring("x")
    fp = fiber_over_k(X, ring("y"))
    rep = check_betti_inequality(fp, ModulePresentation.free(X, 3))
    assert rep.beta0_x == 3 and rep.beta1_x == 0
    assert rep.beta1_fiber >= 3 * rep.beta1_y_of_z


def test_betti_inequality_needs_presentation():
    A, B, Tt = ring("xy"), ring("t"), ring("t", ["t^2"])
    fp = fiber_truncated(SurjectionSpec(A, Tt, ["t", "0"]), SurjectionSpec(B, Tt, ["t"]))
    with pytest.raises(NoPresentation):
        check_betti_inequality(fp)
