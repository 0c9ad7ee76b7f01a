"""Linear-algebra oracles that do not use standard bases.

Everything here works in the finite-dimensional space of polynomials of
degree <= D, so answers are statements modulo m^(D+1).  They are meant as
independent cross-checks for the Mora-based engine.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from . import linalg
from .poly import Poly


def monomials_of_degree(n, d):
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def monomials_up_to(n, D):
    return [m for d in range(D + 1) for m in monomials_of_degree(n, d)]


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class TruncatedIdeal:
    """The subspace (I + m^(D+1)) / m^(D+1) of k[x]/m^(D+1), spanned by monomial multiples."""

    def __init__(self, gens, vars, domain, D=8):
        self.vars = tuple(vars)
        self.domain = domain
        self.D = D
        self.monos = monomials_up_to(len(self.vars), D)
        self.col = {m: i for i, m in enumerate(self.monos)}
        rows = []
        for g in gens:
            for mu in self.monos:
                row = self._dense({_add(e, mu): c for e, c in g.terms.items()})
                if any(row):
                    rows.append(row)
        self.echelon, self.pivots = linalg.rref(rows, len(self.monos), domain)

    @property
    def ncols(self):
        return len(self.monos)

    def _dense(self, terms):
        v = [self.domain.zero] * len(self.monos)
        for e, c in terms.items():
            if sum(e) <= self.D:
                v[self.col[e]] += c
        return v

    def dense(self, f):
        return self._dense(f.terms)

    def contains(self, f):
        """Is ``f`` in I + m^(D+1)?"""
        return not any(linalg.reduce_against(self.dense(f), self.echelon, self.pivots, self.domain))

    def rows(self):
        return [list(r) for r in self.echelon]

    def dimension(self):
        return len(self.pivots)


def _low_part(rows, monos, d, domain):
    """Project rows onto the coordinates of degree < d and return a row-reduced basis."""
    keep = [i for i, m in enumerate(monos) if sum(m) < d]
    proj = [[r[i] for i in keep] for r in rows]
    ech, _ = linalg.rref(proj, len(keep), domain)
    return ech, len(keep)


def truncated_intersection(I, J, vars, domain, D=8):
    """Row basis of (I + m^(D+1)) ∩ (J + m^(D+1)) inside polynomials of degree <= D."""
    A = TruncatedIdeal(I, vars, domain, D)
    B = TruncatedIdeal(J, vars, domain, D)
    ra, rb = A.rows(), B.rows()
    if not ra or not rb:
        return A, []
    # u*A = v*B  <=>  (u, v) in the left kernel of [A; -B]
    stacked = ra + [[-c for c in r] for r in rb]
    cols = [[stacked[i][j] for i in range(len(stacked))] for j in range(A.ncols)]
    null = linalg.nullspace(cols, len(stacked), domain)
    out = []
    for w in null:
        vec = [domain.zero] * A.ncols
        for coef, r in zip(w[: len(ra)], ra):
            if coef:
                for j in range(A.ncols):
                    vec[j] += coef * r[j]
        out.append(vec)
    ech, _ = linalg.rref(out, A.ncols, domain)
    return A, ech


def intersection_agrees(I, J, claimed, vars, domain, D=8, d=None):
    """Compare a claimed generating set of I ∩ J with the oracle below degree ``d``.

    Both sides are projected to degrees < d; with d well below D the
    truncation error of the oracle vanishes (Artin-Rees).
    """
    d = D // 2 + 1 if d is None else d
    A, meet = truncated_intersection(I, J, vars, domain, D)
    C = TruncatedIdeal(claimed, vars, domain, D)
    lo_oracle, n = _low_part(meet, A.monos, d, domain)
    lo_claim, _ = _low_part(C.rows(), C.monos, d, domain)
    if len(lo_oracle) != len(lo_claim):
        return False
    return linalg.rank(lo_oracle + lo_claim, n, domain) == len(lo_oracle)


# ---------------------------------------------------------------- graded Betti numbers


class GradedQuotient:
    """k[x]/I for a homogeneous ideal I, degree by degree up to ``maxdeg``."""

    def __init__(self, vars, gens, domain, maxdeg):
        self.vars = tuple(vars)
        self.n = len(self.vars)
        self.domain = domain
        self.maxdeg = maxdeg
        for g in gens:
            if not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous")
        self._levels = []
        for d in range(maxdeg + 1):
            monos = monomials_of_degree(self.n, d)
            col = {m: i for i, m in enumerate(monos)}
            rows = []
            for g in gens:
                if g.is_zero():
                    continue
                gd = g.degree()
                if gd > d:
                    continue
                for mu in monomials_of_degree(self.n, d - gd):
                    row = [domain.zero] * len(monos)
                    for e, c in g.terms.items():
                        row[col[_add(e, mu)]] += c
                    rows.append(row)
            ech, piv = linalg.rref(rows, len(monos), domain)
            basis = [i for i in range(len(monos)) if i not in set(piv)]
            self._levels.append((monos, col, ech, piv, basis))
        self._mono_cache = {}

    def dim(self, d):
        if d < 0 or d > self.maxdeg:
            return 0
        return len(self._levels[d][4])

    def basis(self, d):
        monos, _, _, _, basis = self._levels[d]
        return [monos[i] for i in basis]

    def coords_of_monomial(self, e):
        c = self._mono_cache.get(e)
        if c is None:
            d = sum(e)
            monos, col, ech, piv, basis = self._levels[d]
            v = [self.domain.zero] * len(monos)
            v[col[e]] = self.domain.one
            v = linalg.reduce_against(v, ech, piv, self.domain)
            c = self._mono_cache[e] = tuple(v[i] for i in basis)
        return c

    def times_monomial(self, mu, d, coords):
        """``mu`` times an element of degree ``d`` given by coordinates."""
        out = [self.domain.zero] * self.dim(d + sum(mu))
        for b, c in zip(self.basis(d), coords):
            if c:
                for k, s in enumerate(self.coords_of_monomial(_add(b, mu))):
                    if s:
                        out[k] += c * s
        return out


class _Free:
    """Graded free module with generators in the given degrees."""

    def __init__(self, ring, degrees):
        self.ring = ring
        self.degrees = list(degrees)

    def dim(self, d):
        return sum(self.ring.dim(d - a) for a in self.degrees)

    def blocks(self, d):
        out, start = [], 0
        for a in self.degrees:
            k = self.ring.dim(d - a)
            out.append((start, k, d - a))
            start += k
        return out

    def times_monomial(self, mu, d, v):
        t = sum(mu)
        out = []
        for (start, k, e), a in zip(self.blocks(d), self.degrees):
            if e < 0:
                out.extend([self.ring.domain.zero] * self.ring.dim(d + t - a))
                continue
            out.extend(self.ring.times_monomial(mu, e, v[start : start + k]))
        return out


def _minimal_generators(free, elements, top):
    """Pick minimal generators among homogeneous elements [(degree, coords)] of a submodule."""
    ring = free.ring
    chosen = []
    for d in range(top + 1):
        lower = []
        for e, v in chosen:
            for mu in monomials_of_degree(ring.n, d - e):
                lower.append(free.times_monomial(mu, e, v))
        width = free.dim(d)
        base = linalg.rank(lower, width, ring.domain) if lower else 0
        current = list(lower)
        for e, v in elements:
            if e != d:
                continue
            trial = current + [list(v)]
            r = linalg.rank(trial, width, ring.domain)
            if r > base:
                chosen.append((d, v))
                current, base = trial, r
    return chosen


def _kernel_elements(free, gens, top):
    """k-bases of the kernel of F -> free, F free on ``gens``, in each degree <= top."""
    ring = free.ring
    F = _Free(ring, [e for e, _ in gens])
    out = []
    for d in range(top + 1):
        cols = []
        for (start, k, e), (a, v) in zip(F.blocks(d), gens):
            if e < 0:
                continue
            for mu in ring.basis(e):
                cols.append(free.times_monomial(mu, a, v))
        if not cols:
            continue
        width = free.dim(d)
        mat = [[cols[j][i] for j in range(len(cols))] for i in range(width)]
        for z in linalg.nullspace(mat, len(cols), ring.domain):
            out.append((d, list(z)))
    return F, out


def graded_betti(ring, rank, relations, steps, top):
    """Total Betti numbers of coker(relations) over a graded quotient, generators in degree 0.

    ``relations`` are (degree, vector of Poly) pairs; only minimal generators
    of degree <= ``top`` are counted, so results are exact once ``top``
    exceeds the generator degrees of every syzygy module involved.
    """
    free = _Free(ring, [0] * rank)
    elements = []
    for e, vec in relations:
        coords = []
        for p in vec:
            block = [ring.domain.zero] * ring.dim(e)
            for m, c in p.terms.items():
                if sum(m) != e:
                    raise ValueError("relation is not homogeneous")
                for k, s in enumerate(ring.coords_of_monomial(m)):
                    block[k] += c * s
            coords.extend(block)
        elements.append((e, coords))
    betti = [rank]
    for _ in range(steps):
        gens = _minimal_generators(free, elements, top)
        betti.append(len(gens))
        if not gens:
            break
        free, elements = _kernel_elements(free, gens, top)
    betti = (betti + [0] * (steps + 1))[: steps + 1]
    return tuple(betti)


def graded_residue_betti(vars, gens, domain, steps, top=None):
    """Betti numbers of k over k[x]/I for homogeneous I."""
    top = steps + 3 if top is None else top
    ring = GradedQuotient(vars, gens, domain, top)
    rels = [(1, (Poly.variable(vars, domain, v),)) for v in vars]
    return graded_betti(ring, 1, rels, steps, top)


def graded_ambient_betti(vars, gens, domain, top=None):
    """Betti numbers of k[x]/I over k[x] for homogeneous I."""
    n = len(vars)
    top = (max((g.degree() for g in gens), default=0) + n + 2) if top is None else top
    ring = GradedQuotient(vars, [], domain, top)
    rels = [(g.degree(), (g,)) for g in gens if g]
    return graded_betti(ring, 1, rels, n + 1, top)
