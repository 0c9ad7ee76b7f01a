"""Fiber products R x_T S of presented local rings along surjections.

Closed-form presentations are produced in two cases: gluing over the
residue field, k[[x]]/I x_k k[[y]]/J = k[[x, y]]/(I + J + (x_i y_j)), and two
quotients of one ambient ring, A/I x_{A/(I+J)} A/J = A/(I ∩ J).  Every other
fiber product is modelled level by level as the subalgebra of pairs in
R/m^n x S/m^n agreeing in T/m^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import (
    AmbientMismatch,
    IllDefinedMap,
    NonSurjectiveMap,
    NoPresentation,
    TrivialFactor,
    ZeroIdeal,
)
from .local_ring import LocalRingPresentation, depth, edim, krull_dim, truncate
from .poly import EliminationOrder, Poly, parse_poly
from .standard import standard_basis_terms, std_basis, syzygies_of_generators


class SurjectionSpec:
    """Local homomorphism ``source -> target`` given by images of the source variables."""

    def __init__(self, source, target, images):
        if len(images) != source.nvars:
            raise IllDefinedMap(f"{len(images)} images given for {source.nvars} variables")
        polys = []
        for img in images:
            if isinstance(img, str):
                img = parse_poly(img, target.ambient_vars, target.field)
            if img.vars != target.ambient_vars or img.domain != target.field:
                raise IllDefinedMap(f"image {img} is not in {target}")
            if img.constant_term():
                raise IllDefinedMap(f"image {img} is not in the maximal ideal")
            polys.append(img)
        if source.field != target.field:
            raise AmbientMismatch("source and target fields differ")
        self.source = source
        self.target = target
        self.images = tuple(polys)
        for g in source.ideal_gens:
            if not target.contains(self.apply(g)):
                raise IllDefinedMap(f"generator {g} of the source ideal does not map into the target ideal")
        self._surjective = None
        self._kernel = None

    @classmethod
    def identity_on_names(cls, source, target):
        """The map sending each source variable to the same-named target variable, or to 0."""
        imgs = [target.var(v) if v in target.ambient_vars else target.zero() for v in source.ambient_vars]
        return cls(source, target, imgs)

    def apply(self, f):
        if not self.images:
            return Poly.constant(self.target.ambient_vars, self.target.field, f.constant_term())
        return f.substitute(list(self.images))

    @property
    def is_surjective(self):
        if self._surjective is None:
            self._surjective = check_surjective(self)
        return self._surjective

    def kernel(self):
        """Generators of the kernel, as polynomials in the source ring.

        Computed by eliminating the target variables from
        ``I_target + I_source + (s_i - image_i)`` under a block order that is
        global on the target block and local on the source block.
        """
        if self._kernel is None:
            self._kernel = tuple(_eliminate_kernel(self))
        return self._kernel

    def is_isomorphism(self):
        return self.is_surjective and all(self.source.contains(g) for g in self.kernel())

    def __repr__(self):
        pairs = ", ".join(f"{v} -> {p}" for v, p in zip(self.source.ambient_vars, self.images))
        return f"SurjectionSpec({self.source} -> {self.target}: {pairs})"


def check_surjective(f):
    """The images' linear parts must span the target cotangent space m/(m^2 + I)."""
    T = f.target
    n = T.nvars
    if n == 0:
        return True
    base = [g.linear_part() for g in T.ideal_gens]
    rows = base + [p.linear_part() for p in f.images]
    return linalg.rank(rows, n, T.field) == n


def _eliminate_kernel(f):
    S, T = f.source, f.target
    nt, ns = T.nvars, S.nvars
    if ns == 0:
        return []
    names = tuple(f"t{i}" for i in range(nt)) + tuple(f"s{i}" for i in range(ns))
    dom = S.field

    def from_target(p):
        return Poly(names, dom, {e + (0,) * ns: c for e, c in p.terms.items()})

    def from_source(p):
        return Poly(names, dom, {(0,) * nt + e: c for e, c in p.terms.items()})

    gens = [from_target(g) for g in T.ideal_gens] + [from_source(g) for g in S.ideal_gens]
    for i, img in enumerate(f.images):
        gens.append(Poly.variable(names, dom, names[nt + i]) - from_target(img))
    gens = [g for g in gens if g]
    basis = standard_basis_terms(gens, EliminationOrder(nt), names, dom)
    out = []
    for g in basis:
        if all(not any(e[:nt]) for e in g.terms):
            p = Poly(S.ambient_vars, dom, {e[nt:]: c for e, c in g.terms.items()})
            if not S.contains(p):
                out.append(p)
    if out:
        out = std_basis(out)
    return out


# ---------------------------------------------------------------- fiber products


@dataclass
class FiberProductResult:
    """R x_T S along ``map_R`` and ``map_S``, with a presentation when one is known."""

    R: LocalRingPresentation
    S: LocalRingPresentation
    T: LocalRingPresentation
    map_R: SurjectionSpec
    map_S: SurjectionSpec
    provenance: str
    presentation: LocalRingPresentation = None
    proj_R: SurjectionSpec = None
    proj_S: SurjectionSpec = None
    r_names: tuple = ()
    kernel_R: tuple = ()
    dim: int = None
    depth: int = None
    depth_exact: bool = False
    _pairs: dict = field(default_factory=dict, repr=False)

    def lift_from_R(self, p):
        """A preimage of ``p`` under the projection onto R."""
        return p.rename(self.r_names).embed(self.presentation.ambient_vars)

    def module_over_fiber(self, M):
        """Restrict scalars of an R-module along the projection P -> R."""
        from .resolution import ModulePresentation

        if self.presentation is None:
            raise NoPresentation("no closed-form presentation available")
        P = self.presentation
        rels = [tuple(self.lift_from_R(p) for p in v) for v in M.relations]
        zero = P.zero()
        for g in self.kernel_R:
            for c in range(M.rank):
                rels.append(tuple(g if k == c else zero for k in range(M.rank)))
        return ModulePresentation(P, M.rank, rels)

    def pair_algebra(self, n):
        if n not in self._pairs:
            self._pairs[n] = PairAlgebra(self.R, self.S, self.T, self.map_R, self.map_S, n)
        return self._pairs[n]


def _require_surjective(*maps):
    for m in maps:
        if not m.is_surjective:
            raise NonSurjectiveMap(
                f"{m.source} -> {m.target} is not surjective; gluing along such a map can leave "
                "the Noetherian world (e.g. the ring k[[x, xy, xy^2, ...]])"
            )


def _fresh_names(taken, names):
    out = []
    used = set(taken)
    for v in names:
        new = v
        k = 2
        while new in used:
            new = f"{v}_{k}"
            k += 1
        used.add(new)
        out.append(new)
    return tuple(out)


def residue_field_of(R):
    return LocalRingPresentation((), (), R.field)


def fiber_over_k(R, S):
    """k[[x]]/I x_k k[[y]]/J presented as k[[x, y]]/(I + J + (x_i y_j))."""
    if R.field != S.field:
        raise AmbientMismatch("factors over different fields")
    if edim(R) == 0 or edim(S) == 0:
        raise TrivialFactor("a factor equals the residue field; the fiber product would be trivial")
    x = R.ambient_vars
    y = _fresh_names(x, S.ambient_vars)
    names = x + y
    gens = [g.embed(names) for g in R.ideal_gens]
    gens += [g.rename(y).embed(names) for g in S.ideal_gens]
    for a in x:
        for b in y:
            gens.append(Poly.variable(names, R.field, a) * Poly.variable(names, R.field, b))
    P = LocalRingPresentation(names, gens, R.field)
    k = residue_field_of(R)
    zero_k = k.zero()
    map_R = SurjectionSpec(R, k, [zero_k] * R.nvars)
    map_S = SurjectionSpec(S, k, [zero_k] * S.nvars)
    proj_R = SurjectionSpec(P, R, [R.var(v) for v in x] + [R.zero()] * len(y))
    proj_S = SurjectionSpec(P, S, [S.zero()] * len(x) + [S.var(v) for v in S.ambient_vars])
    return FiberProductResult(
        R=R, S=S, T=k, map_R=map_R, map_S=map_S,
        provenance="over-residue-field",
        presentation=P, proj_R=proj_R, proj_S=proj_S,
        r_names=x,
        kernel_R=tuple(P.var(b) for b in y),
        dim=max(krull_dim(R), krull_dim(S)),
        depth=min(depth(R), depth(S), 1),
        depth_exact=True,
    )


def ideal_intersection(A, I, J):
    """Generators of (I + K) ∩ (J + K) for the base ideal K of ``A``, via syzygies."""
    K = list(A.ideal_gens)
    left = [g for g in list(I) + K if g]
    right = [g for g in list(J) + K if g]
    gens = left + [-g for g in right]
    out = []
    for s in syzygies_of_generators(gens):
        h = A.zero()
        for a, g in zip(s[: len(left)], left):
            h = h + a * g
        if h:
            out.append(h)
    if not out:
        return []
    return std_basis(out)


def fiber_same_ambient(A, I, J):
    """A/I x_{A/(I+J)} A/J presented as A/(I ∩ J)."""
    I = [A.poly(g) if isinstance(g, str) else g for g in I]
    J = [A.poly(g) if isinstance(g, str) else g for g in J]
    if all(A.contains(g) for g in I) or all(A.contains(g) for g in J):
        raise ZeroIdeal("both ideals must be nonzero in the ambient ring")
    base = list(A.ideal_gens)
    meet = ideal_intersection(A, I, J)
    names, dom = A.ambient_vars, A.field
    P = LocalRingPresentation(names, base + [g for g in meet if not A.contains(g)], dom)
    R = LocalRingPresentation(names, base + I, dom)
    S = LocalRingPresentation(names, base + J, dom)
    T = LocalRingPresentation(names, base + I + J, dom)
    map_R = SurjectionSpec.identity_on_names(R, T)
    map_S = SurjectionSpec.identity_on_names(S, T)
    return FiberProductResult(
        R=R, S=S, T=T, map_R=map_R, map_S=map_S,
        provenance="same-ambient-intersection",
        presentation=P,
        proj_R=SurjectionSpec.identity_on_names(P, R),
        proj_S=SurjectionSpec.identity_on_names(P, S),
        r_names=names,
        kernel_R=tuple(I),
        dim=max(krull_dim(R), krull_dim(S)),
        depth=depth(P),
        depth_exact=True,
    )


def fiber_truncated(map_R, map_S):
    """A fiber product known only through its pair-subalgebra truncations."""
    _require_surjective(map_R, map_S)
    R, S, T = map_R.source, map_S.source, map_R.target
    inv = fiber_invariants(R, S, T, map_R, map_S)
    return FiberProductResult(
        R=R, S=S, T=T, map_R=map_R, map_S=map_S,
        provenance="pair-subalgebra-truncations",
        dim=inv.dim, depth=inv.depth, depth_exact=inv.depth_exact,
    )


@dataclass(frozen=True)
class FiberInvariants:
    dim: int
    depth: int
    depth_exact: bool
    edim: int = None


def fiber_invariants(R, S, T, map_R, map_S):
    """dim = max(dim R, dim S); depth >= min(depth R, depth S, depth T + 1), exact over k."""
    if map_R.target != T or map_S.target != T or map_R.source != R or map_S.source != S:
        raise AmbientMismatch("maps must go R -> T <- S")
    _require_surjective(map_R, map_S)
    dim = max(krull_dim(R), krull_dim(S))
    if edim(T) == 0:
        return FiberInvariants(dim=dim, depth=min(depth(R), depth(S), 1), depth_exact=True)
    return FiberInvariants(dim=dim, depth=min(depth(R), depth(S), depth(T) + 1), depth_exact=False)


# ---------------------------------------------------------------- truncated model


class PairAlgebra:
    """{(r, s) in R/m^n x S/m^n : pi_R(r) = pi_S(s) in T/m^n} with its multiplication."""

    def __init__(self, R, S, T, map_R, map_S, n):
        self.level = n
        self.field = R.field
        self.Rn, self.Sn, self.Tn = truncate(R, n), truncate(S, n), truncate(T, n)
        self.A_R = self.Rn.map_matrix(self.Tn, list(map_R.images))
        self.A_S = self.Sn.map_matrix(self.Tn, list(map_S.images))
        dr, ds = self.Rn.dimension, self.Sn.dimension
        rows = [list(ar) + [-v for v in as_] for ar, as_ in zip(self.A_R, self.A_S)]
        if rows:
            null = linalg.nullspace(rows, dr + ds, self.field)
        else:
            null = linalg.nullspace([], dr + ds, self.field)
        self.basis = [(tuple(v[:dr]), tuple(v[dr:])) for v in null]
        ech, piv = linalg.rref([r + s for r, s in self.basis], dr + ds, self.field)
        self._ech, self._piv = ech, piv
        self.structure_constants = tuple(
            tuple(self.coordinates(self.multiply_pairs(a, b)) for b in self.basis) for a in self.basis
        )

    @property
    def dimension(self):
        return len(self.basis)

    def multiply_pairs(self, a, b):
        return (self.Rn.multiply(a[0], b[0]), self.Sn.multiply(a[1], b[1]))

    def contains(self, pair):
        r, s = pair
        tr = [sum((row[j] * r[j] for j in range(len(r))), self.field.zero) for row in self.A_R]
        ts = [sum((row[j] * s[j] for j in range(len(s))), self.field.zero) for row in self.A_S]
        return tr == ts

    def coordinates(self, pair):
        """Coordinates of a pair (assumed in the subalgebra) in ``basis``."""
        v = list(pair[0]) + list(pair[1])
        out = []
        for row, p in zip(self._ech, self._piv):
            out.append(v[p])
        # the rref rows form a basis of the same space; convert back to ``basis``
        return tuple(self._to_basis(out))

    def _to_basis(self, ech_coords):
        if not hasattr(self, "_change"):
            # express each rref row in terms of ``basis``
            dim = self.dimension
            full = [list(r) + list(s) for r, s in self.basis]
            m = [[full[i][p] for i in range(dim)] for p in self._piv]
            # m * c = (values of basis vectors at pivot columns); invert it
            inv = _invert(m, self.field)
            self._change = inv
        return [sum((self._change[i][j] * ech_coords[j] for j in range(len(ech_coords))), self.field.zero)
                for i in range(self.dimension)]


def _invert(m, domain):
    from sympy.polys.matrices import DomainMatrix

    n = len(m)
    if n == 0:
        return []
    return DomainMatrix([list(r) for r in m], (n, n), domain).inv().to_list()


@dataclass(frozen=True)
class LevelCheck:
    level: int
    fiber_dimension: int
    pair_dimension: int
    square_commutes: bool
    isomorphic: bool

    @property
    def ok(self):
        return self.fiber_dimension == self.pair_dimension and self.square_commutes and self.isomorphic


def _apply(matrix, v, domain):
    return tuple(sum((row[j] * v[j] for j in range(len(v)) if v[j]), domain.zero) for row in matrix)


def verify_fibercomplete(fp, n_max):
    """Compare truncations of the presented fiber product with fiber products of truncations."""
    if fp.presentation is None:
        raise NoPresentation("level-wise comparison needs a closed-form presentation")
    _require_surjective(fp.map_R, fp.map_S)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = []
    dom = fp.R.field
    for n in range(1, n_max + 1):
        Pn = truncate(fp.presentation, n)
        pair = fp.pair_algebra(n)
        M_R = Pn.map_matrix(pair.Rn, list(fp.proj_R.images))
        M_S = Pn.map_matrix(pair.Sn, list(fp.proj_S.images))
        commutes = linalg.matmul(pair.A_R, M_R, dom) == linalg.matmul(pair.A_S, M_S, dom)
        images = [(_apply(M_R, Pn.unit_vector(k), dom), _apply(M_S, Pn.unit_vector(k), dom)) for k in range(Pn.dimension)]
        iso = commutes and Pn.dimension == pair.dimension
        if iso:
            stacked = [list(r) + list(s) for r, s in images]
            iso = linalg.rank(stacked, pair.Rn.dimension + pair.Sn.dimension, dom) == Pn.dimension
        if iso:
            coords = [pair.coordinates(im) for im in images]
            for i in range(Pn.dimension):
                for j in range(Pn.dimension):
                    lhs = _combine(coords, Pn.structure_constants[i][j], dom)
                    rhs = _pair_mult(pair, coords[i], coords[j])
                    if lhs != rhs:
                        iso = False
                        break
                if not iso:
                    break
        out.append(LevelCheck(n, Pn.dimension, pair.dimension, commutes, iso))
    return out


def _combine(coords, weights, dom):
    dim = len(coords[0]) if coords else 0
    acc = [dom.zero] * dim
    for w, c in zip(weights, coords):
        if w:
            for k in range(dim):
                acc[k] += w * c[k]
    return tuple(acc)


def _pair_mult(pair, a, b):
    acc = [pair.field.zero] * pair.dimension
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if not bj:
                continue
            for k, s in enumerate(pair.structure_constants[i][j]):
                if s:
                    acc[k] += ai * bj * s
    return tuple(acc)


def exact_sequence_dimensions(fp, n):
    """dim P_n = dim R_n + dim S_n - dim T_n for the pair model at level ``n``."""
    pair = fp.pair_algebra(n)
    return pair.dimension, pair.Rn.dimension + pair.Sn.dimension - pair.Tn.dimension


def check_topology_powers(fp, n_max=4):
    """(m_R x_{m_T} m_S)^(2n) lies in m_R^n x_{m_T^n} m_S^n, level by level for n <= n_max."""
    results = []
    for n in range(1, n_max + 1):
        pair = fp.pair_algebra(2 * n + 1)
        dom = pair.field

        def deep(trunc, vec, d):
            return all(not c for c, m in zip(vec, trunc.monomial_basis) if sum(m) < d)

        H = [p for p in _span_filter(pair, 1)]
        power = list(H)
        for _ in range(2 * n - 1):
            prods = [pair.multiply_pairs(a, b) for a in power for b in H]
            power = _basis_of(prods, pair)
        ok = all(deep(pair.Rn, r, n) and deep(pair.Sn, s, n) for r, s in power)
        if ok:
            ok = all(
                deep(pair.Tn, _apply(pair.A_R, r, dom), n) for r, _ in power
            )
        results.append((n, ok))
    return results


def _span_filter(pair, d):
    """Basis of the pairs whose components both lie in m^d."""
    Rn, Sn = pair.Rn, pair.Sn
    low = [i for i, m in enumerate(Rn.monomial_basis) if sum(m) < d]
    low_s = [Rn.dimension + i for i, m in enumerate(Sn.monomial_basis) if sum(m) < d]
    cols = low + low_s
    full = [list(r) + list(s) for r, s in pair.basis]
    if not cols:
        return list(pair.basis)
    rows = [[full[i][c] for i in range(len(full))] for c in cols]
    null = linalg.nullspace(rows, len(full), pair.field)
    out = []
    for v in null:
        vec = [sum((v[i] * full[i][k] for i in range(len(full))), pair.field.zero) for k in range(len(full[0]))]
        out.append((tuple(vec[: Rn.dimension]), tuple(vec[Rn.dimension :])))
    return out


def _basis_of(pairs, pair):
    dr = pair.Rn.dimension
    rows = [list(r) + list(s) for r, s in pairs]
    if not rows:
        return []
    ech, _ = linalg.rref(rows, dr + pair.Sn.dimension, pair.field)
    return [(tuple(r[:dr]), tuple(r[dr:])) for r in ech]


def _is_identity(f):
    return f.source.ambient_vars == f.target.ambient_vars and all(
        img == f.target.var(v) for v, img in zip(f.source.ambient_vars, f.images)
    )


def _same_ambient_case(map_R, map_S):
    R, S, T = map_R.source, map_S.source, map_R.target
    if not (R.ambient_vars == S.ambient_vars == T.ambient_vars and _is_identity(map_R) and _is_identity(map_S)):
        return False
    both = LocalRingPresentation(T.ambient_vars, list(R.ideal_gens) + list(S.ideal_gens), T.field)
    return all(both.contains(g) for g in T.ideal_gens) and all(T.contains(g) for g in both.ideal_gens)


def fiber_product(map_R, map_S):
    """R x_T S, choosing a closed form when one applies and truncations otherwise."""
    if map_R.target != map_S.target:
        raise AmbientMismatch("the two maps have different targets")
    _require_surjective(map_R, map_S)
    R, S, T = map_R.source, map_S.source, map_R.target
    if _same_ambient_case(map_R, map_S):
        A = LocalRingPresentation(T.ambient_vars, (), T.field)
        fp = fiber_same_ambient(A, list(R.ideal_gens), list(S.ideal_gens))
    elif edim(T) == 0:
        fp = fiber_over_k(R, S)
    else:
        return fiber_truncated(map_R, map_S)
    fp.R, fp.S, fp.T, fp.map_R, fp.map_S = R, S, T, map_R, map_S
    return fp
