import pytest
from sympy import QQ

from formalglue.errors import IllDefinedMap, NonSurjectiveMap, NoPresentation, TrivialFactor, ZeroIdeal
from formalglue.fiber import (
    SurjectionSpec,
    check_surjective,
    check_topology_powers,
    exact_sequence_dimensions,
    fiber_invariants,
    fiber_over_k,
    fiber_product,
    fiber_same_ambient,
    fiber_truncated,
    ideal_intersection,
    verify_fibercomplete,
)
from formalglue.local_ring import LocalRingPresentation, depth, edim, krull_dim, present
from formalglue.oracles import intersection_agrees


def ring(vars, gens=()):
    return present(list(vars), list(gens))


K = LocalRingPresentation((), (), QQ)


def to_k(R):
    return SurjectionSpec(R, K, [K.zero()] * R.nvars)


def same_ideal(R, gens, expected):
    A = ring(R.ambient_vars)
    Ig = present(list(R.ambient_vars), [str(g) for g in gens])
    Ie = present(list(R.ambient_vars), expected)
    return all(Ig.contains(A.poly(e)) for e in expected) and all(Ie.contains(g) for g in gens)


# ---- surjectivity and kernels

def test_check_surjective_examples():
    A, B = ring("xy"), ring("xy", ["x"])
    assert check_surjective(SurjectionSpec.identity_on_names(A, B))
    assert not check_surjective(SurjectionSpec(K, ring("xy", ["x"]), []))
    T = ring("t", ["t^3"])
    assert check_surjective(SurjectionSpec(ring("x"), T, ["t + t^2"]))
    assert not check_surjective(SurjectionSpec(ring("x"), ring("t"), ["t^2"]))


def test_ill_defined_map():
    with pytest.raises(IllDefinedMap):
        SurjectionSpec(ring("x", ["x^2"]), ring("t"), ["t"])
    with pytest.raises(IllDefinedMap):
        SurjectionSpec(ring("x"), ring("t"), ["1 + t"])
    with pytest.raises(IllDefinedMap):
        SurjectionSpec(ring("xy"), ring("t"), ["t"])


@pytest.mark.parametrize("images,expected", [
    (["t^2", "t^3"], ["y^2 - x^3"]),
    (["t", "t^2"], ["y - x^2"]),
    (["t", "0"], ["y"]),
])
def test_kernel_examples(images, expected):
    f = SurjectionSpec(ring("xy"), ring("t"), images)
    assert same_ideal(f.source, f.kernel(), expected)


def test_isomorphism_detection():
    A = ring("xy", ["x*y"])
    assert SurjectionSpec.identity_on_names(A, A).is_isomorphism()
    assert not to_k(ring("x")).is_isomorphism()


# ---- over the residue field

@pytest.mark.parametrize("r,s", [
    (("x", []), ("y", [])),
    (("x", []), ("yz", [])),
    (("xy", ["x*y"]), ("z", [])),
    (("x", ["x^2"]), ("y", ["y^2"])),
    (("xy", ["y^2 - x^3"]), ("z", [])),
])
def test_fiber_over_k_invariants(r, s):
    R, S = ring(*r), ring(*s)
    fp = fiber_over_k(R, S)
    P = fp.presentation
    assert krull_dim(P) == fp.dim == max(krull_dim(R), krull_dim(S))
    assert edim(P) == edim(R) + edim(S)
    assert depth(P) == fp.depth == min(depth(R), depth(S), 1)


def test_fiber_over_k_node():
    fp = fiber_over_k(ring("x"), ring("y"))
    assert [str(g) for g in fp.presentation.std] == ["x*y"]
    assert fp.provenance == "over-residue-field"


def test_fiber_over_k_fat_points():
    fp = fiber_over_k(ring("x", ["x^2"]), ring("y", ["y^2"]))
    assert same_ideal(fp.presentation, fp.presentation.ideal_gens, ["x^2", "y^2", "x*y"])
    assert krull_dim(fp.presentation) == 0


def test_fiber_over_k_renames_clashing_variables():
    fp = fiber_over_k(ring("x"), ring("x"))
    assert fp.presentation.ambient_vars == ("x", "x_2")


def test_three_axes_by_iteration():
    node = fiber_over_k(ring("x"), ring("y")).presentation
    fp = fiber_over_k(node, ring("z"))
    assert same_ideal(fp.presentation, fp.presentation.ideal_gens, ["x*y", "x*z", "y*z"])


def test_trivial_factor():
    with pytest.raises(TrivialFactor):
        fiber_over_k(K, ring("x"))


# ---- same ambient

@pytest.mark.parametrize("I,J", [
    (["x"], ["y"]),
    (["x^2"], ["x^3"]),
    (["x"], ["x + y^2"]),
    (["x*z"], ["y*z"]),
])
def test_intersection_against_oracle(I, J):
    vars = "xy" if "z" not in "".join(I + J) else "xyz"
    A = ring(vars)
    meet = ideal_intersection(A, [A.poly(g) for g in I], [A.poly(g) for g in J])
    assert intersection_agrees([A.poly(g) for g in I], [A.poly(g) for g in J], meet, tuple(vars), QQ, D=8)


def test_oracle_rejects_wrong_intersection():
    A = ring("xy")
    assert not intersection_agrees([A.poly("x")], [A.poly("y")], [A.poly("x")], ("x", "y"), QQ, D=8)


def test_same_ambient_example():
    A = ring("xyz")
    fp = fiber_same_ambient(A, ["x"], ["y"])
    assert same_ideal(fp.presentation, fp.presentation.ideal_gens, ["x*y"])
    assert fp.provenance == "same-ambient-intersection"
    assert fp.dim == 2 and fp.depth == depth(fp.presentation) == 2


def test_same_ambient_zero_ideal():
    A = ring("xy")
    with pytest.raises(ZeroIdeal):
        fiber_same_ambient(A, ["0"], ["y"])


def test_dispatcher_picks_closed_forms():
    A, B = ring("xy", ["x"]), ring("xy", ["y"])
    T = ring("xy", ["x", "y"])
    fp = fiber_product(SurjectionSpec.identity_on_names(A, T), SurjectionSpec.identity_on_names(B, T))
    assert fp.provenance == "same-ambient-intersection"
    fp = fiber_product(to_k(ring("x")), to_k(ring("y")))
    assert fp.provenance == "over-residue-field"


# ---- invariants

def test_fiber_invariants_over_k():
    R, S = ring("x"), ring("yz")
    inv = fiber_invariants(R, S, K, to_k(R), to_k(S))
    assert (inv.dim, inv.depth, inv.depth_exact) == (2, 1, True)


def test_fiber_invariants_depth_bound():
    R = S = ring("x")
    T = ring("x", ["x^2"])
    f = SurjectionSpec.identity_on_names(R, T)
    inv = fiber_invariants(R, S, T, f, f)
    assert (inv.dim, inv.depth, inv.depth_exact) == (1, 1, False)


def test_non_surjective_refused():
    f = SurjectionSpec(ring("x"), ring("t"), ["t^2"])
    g = SurjectionSpec.identity_on_names(ring("t"), ring("t"))
    with pytest.raises(NonSurjectiveMap, match="k\\[\\[x, xy, xy\\^2"):
        fiber_product(f, g)
    with pytest.raises(NonSurjectiveMap):
        fiber_invariants(f.source, g.source, f.target, f, g)


# ---- truncations

def test_level_comparison_node():
    fp = fiber_over_k(ring("x"), ring("y"))
    checks = verify_fibercomplete(fp, 4)
    assert [c.fiber_dimension for c in checks] == [1, 3, 5, 7]
    assert [c.pair_dimension for c in checks] == [1, 3, 5, 7]
    assert all(c.ok for c in checks)


def test_level_comparison_three_axes():
    fp = fiber_over_k(fiber_over_k(ring("x"), ring("y")).presentation, ring("z"))
    checks = verify_fibercomplete(fp, 3)
    assert [c.fiber_dimension for c in checks] == [1, 4, 7]
    assert all(c.ok for c in checks)


def test_truncation_mismatch_same_ambient():
    # the pair model of a same-ambient fiber product over T != k is smaller than P/m^n
    A = ring("xy")
    fp = fiber_same_ambient(A, ["x"], ["x + y^2"])
    checks = verify_fibercomplete(fp, 2)
    assert (checks[1].fiber_dimension, checks[1].pair_dimension) == (3, 2)
    assert not checks[1].ok


def test_exact_sequence_and_topology():
    fp = fiber_over_k(ring("x"), ring("y"))
    for n in range(1, 5):
        lhs, rhs = exact_sequence_dimensions(fp, n)
        assert lhs == rhs
    assert all(ok for _, ok in check_topology_powers(fp, 3))


def test_pair_algebra_multiplication():
    fp = fiber_over_k(ring("x"), ring("y"))
    pair = fp.pair_algebra(3)
    assert pair.dimension == 5
    for a in pair.basis:
        assert pair.contains(a)
        for b in pair.basis:
            assert pair.contains(pair.multiply_pairs(a, b))


def test_truncated_fiber_product():
    A, B, T = ring("xy"), ring("t"), ring("t", ["t^2"])
    fp = fiber_truncated(SurjectionSpec(A, T, ["t", "0"]), SurjectionSpec(B, T, ["t"]))
    assert fp.presentation is None and fp.dim == 2
    assert fp.provenance == "pair-subalgebra-truncations"
    with pytest.raises(NoPresentation):
        verify_fibercomplete(fp, 2)
    lhs, rhs = exact_sequence_dimensions(fp, 3)
    assert lhs == rhs
