"""Presented local rings k[[x_1..x_n]]/I, their invariants and adic truncations."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations

from sympy import QQ

from . import linalg
from .errors import ConstantTermPresent, DuplicateVariable, AmbientMismatch
from .poly import DS, Poly, field_label, parse_poly
from .standard import ideal_contains, leading_monomials, mora_normal_form, std_basis


class LocalRingPresentation:
    """The complete local ring ``k[[vars]]/(gens)``.

    Every generator must lie in the maximal ideal. The standard basis of the
    ideal is computed on first access and cached.
    """

    def __init__(self, vars, gens=(), field=QQ):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            dup = sorted({v for v in vars if vars.count(v) > 1})
            raise DuplicateVariable(f"repeated variable(s): {', '.join(dup)}")
        self.ambient_vars = vars
        self.field = field
        polys = []
        for g in gens:
            if isinstance(g, str):
                g = parse_poly(g, vars, field)
            if g.vars != vars or g.domain != field:
                raise AmbientMismatch(f"generator {g} is not in k[[{', '.join(vars)}]]")
            if g.constant_term():
                raise ConstantTermPresent(f"generator {g} has a nonzero constant term")
            polys.append(g)
        self.ideal_gens = tuple(polys)
        self._lock = threading.Lock()
        self._std = None

    @property
    def nvars(self):
        return len(self.ambient_vars)

    @property
    def std(self):
        if self._std is None:
            with self._lock:
                if self._std is None:
                    self._std = tuple(std_basis([g for g in self.ideal_gens if g]))
        return self._std

    def poly(self, text):
        return parse_poly(text, self.ambient_vars, self.field)

    def var(self, name):
        return Poly.variable(self.ambient_vars, self.field, name)

    def variables(self):
        return [self.var(v) for v in self.ambient_vars]

    def zero(self):
        return Poly.zero(self.ambient_vars, self.field)

    def one(self):
        return Poly.constant(self.ambient_vars, self.field, 1)

    def contains(self, f):
        """Is ``f`` in the defining ideal (i.e. zero in the ring)?"""
        return ideal_contains(list(self.std), f)

    def reduce(self, f):
        """Normal form of ``f`` modulo the ideal (up to a unit factor)."""
        if not self.std:
            return f
        return mora_normal_form(f, list(self.std))

    def is_field(self):
        return edim(self) == 0

    def __eq__(self, other):
        return (
            isinstance(other, LocalRingPresentation)
            and self.ambient_vars == other.ambient_vars
            and self.field == other.field
            and self.ideal_gens == other.ideal_gens
        )

    def __hash__(self):
        return hash((self.ambient_vars, self.ideal_gens))

    def __str__(self):
        if not self.ambient_vars:
            return "k"
        base = f"k[[{', '.join(self.ambient_vars)}]]"
        if not self.ideal_gens:
            return base
        return f"{base}/({', '.join(str(g) for g in self.ideal_gens)})"

    def __repr__(self):
        return f"LocalRingPresentation({str(self)!r}, field={field_label(self.field)})"


def present(vars, gens=(), field=QQ):
    return LocalRingPresentation(vars, gens, field)


@dataclass(frozen=True)
class InvariantsReport:
    edim: int
    dim: int
    depth: int
    regular: bool


def edim(R):
    """dim_k m/(m^2 + I): variables minus the rank of the generators' linear parts."""
    rows = [g.linear_part() for g in R.ideal_gens]
    return R.nvars - linalg.rank(rows, R.nvars, R.field)


def _independent_sets(lead_monos, n):
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in lead_monos]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                yield size, subset
                return


def krull_dim(R):
    """Largest set of variables containing the support of no leading monomial."""
    lead = leading_monomials(list(R.std))
    return next(_independent_sets(lead, R.nvars))[0]


def depth(R):
    """Ambient dimension minus projective dimension over k[[x_1..x_n]]."""
    from .resolution import ambient_projective_dimension

    return R.nvars - ambient_projective_dimension(R)


def is_regular(R):
    return krull_dim(R) == edim(R)


def invariants(R):
    e, d = edim(R), krull_dim(R)
    return InvariantsReport(edim=e, dim=d, depth=depth(R), regular=(d == e))


# ---------------------------------------------------------------- truncations


def _monomials_below(n, degree):
    """All exponent vectors in ``n`` variables of total degree < ``degree``."""
    out = []

    def rec(prefix, left, i):
        if i == n:
            out.append(tuple(prefix))
            return
        for a in range(left + 1):
            prefix.append(a)
            rec(prefix, left - a, i + 1)
            prefix.pop()

    if degree > 0:
        rec([], degree - 1, 0)
    out.sort(key=DS.key, reverse=True)
    return out


class ArtinianTruncation:
    """The finite-dimensional algebra R/(I + m^level).

    The basis consists of the standard monomials: those not chosen as pivots
    when the ideal's span is row-reduced with columns in decreasing local
    order. ``structure_constants[i][j]`` is the coordinate vector of
    ``basis[i] * basis[j]``.
    """

    def __init__(self, ring, level):
        if level < 1:
            raise ValueError("truncation level must be >= 1")
        self.ring = ring
        self.level = level
        self.field = ring.field
        monos = _monomials_below(ring.nvars, level)
        self._col = {m: i for i, m in enumerate(monos)}
        self._monos = monos
        rows = []
        for g in ring.ideal_gens:
            o = g.order()
            if o < 0 or o >= level:
                continue
            for mu in monos:
                if sum(mu) + o >= level:
                    continue
                row = [self.field.zero] * len(monos)
                for e, c in g.terms.items():
                    t = tuple(a + b for a, b in zip(e, mu))
                    if sum(t) < level:
                        row[self._col[t]] += c
                rows.append(row)
        self._echelon, self._pivots = linalg.rref(rows, len(monos), self.field)
        pivset = set(self._pivots)
        self._basis_cols = [i for i in range(len(monos)) if i not in pivset]
        self.monomial_basis = tuple(monos[i] for i in self._basis_cols)
        self._index = {m: k for k, m in enumerate(self.monomial_basis)}
        self.structure_constants = tuple(
            tuple(self._reduce_exps(tuple(a + b for a, b in zip(bi, bj))) for bj in self.monomial_basis)
            for bi in self.monomial_basis
        )

    @property
    def dimension(self):
        return len(self.monomial_basis)

    def _dense(self, terms):
        v = [self.field.zero] * len(self._monos)
        for e, c in terms.items():
            if sum(e) < self.level:
                v[self._col[e]] += c
        return v

    def _project(self, v):
        v = linalg.reduce_against(v, self._echelon, self._pivots, self.field)
        return tuple(v[i] for i in self._basis_cols)

    def _reduce_exps(self, e):
        if sum(e) >= self.level:
            return tuple(self.field.zero for _ in self.monomial_basis)
        return self._project(self._dense({e: self.field.one}))

    def coordinates(self, f):
        """Coordinates of the class of polynomial ``f`` in the monomial basis."""
        if f.vars != self.ring.ambient_vars:
            raise AmbientMismatch("polynomial is not in this ring")
        return self._project(self._dense(f.terms))

    def multiply(self, a, b):
        out = [self.field.zero] * self.dimension
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                for k, s in enumerate(self.structure_constants[i][j]):
                    if s:
                        out[k] += c * s
        return tuple(out)

    def unit_vector(self, k):
        return tuple(self.field.one if i == k else self.field.zero for i in range(self.dimension))

    def basis_poly(self, k):
        return Poly.monomial(self.ring.ambient_vars, self.field, self.monomial_basis[k])

    def map_matrix(self, target, images):
        """Matrix (rows = target coordinates) of the map sending variable i to ``images[i]``.

        ``images`` are polynomials in the target ring's variables; the map must
        be a local homomorphism, so it descends to the truncations.
        """
        if len(images) != self.ring.nvars:
            raise AmbientMismatch("one image per source variable is required")
        cache = {}
        n = target.level
        tv, tf = target.ring.ambient_vars, target.field

        def image(e):
            if e in cache:
                return cache[e]
            if not any(e):
                p = Poly.constant(tv, tf, 1)
            else:
                i = next(k for k, a in enumerate(e) if a)
                rest = list(e)
                rest[i] -= 1
                p = (image(tuple(rest)) * images[i]).truncate(n)
            cache[e] = p
            return p

        cols = [target.coordinates(image(m)) for m in self.monomial_basis]
        return [[cols[j][i] for j in range(len(cols))] for i in range(target.dimension)]

    def is_multiplicative(self, target, matrix):
        """Check that ``matrix`` respects the two multiplication tables."""
        def apply(v):
            return tuple(sum((row[j] * v[j] for j in range(len(v)) if v[j]), target.field.zero) for row in matrix)

        images = [apply(self.unit_vector(k)) for k in range(self.dimension)]
        for i in range(self.dimension):
            for j in range(self.dimension):
                if apply(self.structure_constants[i][j]) != target.multiply(images[i], images[j]):
                    return False
        return True


def truncate(R, n):
    return ArtinianTruncation(R, n)


def tower_map(upper, lower):
    """Canonical surjection R/(I+m^n) -> R/(I+m^n') for n' <= n."""
    if lower.ring != upper.ring or lower.level > upper.level:
        raise ValueError("tower maps go from a deeper to a shallower level of the same ring")
    return upper.map_matrix(lower, upper.ring.variables())
