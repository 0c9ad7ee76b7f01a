"""Mora normal forms, standard bases and syzygies in the local ring at the origin.

Internally every element is a free-module vector stored as a dict
``{(component, exponents): coefficient}``; an ideal is the rank-one case.
Module terms are compared position-first (component 0 largest), then by
the monomial order.  Auxiliary polynomials (unit multipliers and
representation coefficients) use the same dict layout with component 0.
"""

from __future__ import annotations

import heapq

from .errors import AmbientMismatch, ConstantTermPresent, NotStandardBasis
from .poly import DS, Poly


class _Elt:
    __slots__ = ("terms", "lm", "lc", "deg", "ecart")

    def __init__(self, terms, mkey):
        self.terms = terms
        self.lm = max(terms, key=mkey)
        self.lc = terms[self.lm]
        self.deg = max(sum(e) for _, e in terms)
        self.ecart = self.deg - sum(self.lm[1])


def _mkey(order):
    key = order.key
    return lambda t: (-t[0], key(t[1]))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _sub_multiple(h, k, m, g):
    """Return ``h - k * x^m * g`` as a fresh dict."""
    out = dict(h)
    for (c, e), v in g.items():
        t = (c, tuple(a + b for a, b in zip(e, m)))
        w = out.get(t)
        w = -k * v if w is None else w - k * v
        if w:
            out[t] = w
        else:
            out.pop(t, None)
    return out


def _pmul(p, q):
    """Product of a scalar polynomial ``p`` (component 0) with a vector ``q``."""
    out = {}
    for (_, e1), c1 in p.items():
        for (c, e2), c2 in q.items():
            t = (c, tuple(a + b for a, b in zip(e1, e2)))
            w = out.get(t)
            w = c1 * c2 if w is None else w + c1 * c2
            if w:
                out[t] = w
            else:
                del out[t]
    return out


def _padd(p, q, sign=1):
    out = dict(p)
    for t, v in q.items():
        w = out.get(t)
        w = (v if sign > 0 else -v) if w is None else (w + v if sign > 0 else w - v)
        if w:
            out[t] = w
        else:
            out.pop(t, None)
    return out


def _one(n, domain):
    return {(0, (0,) * n): domain.one}


def _spoly(g1, g2):
    lcm = tuple(max(a, b) for a, b in zip(g1.lm[1], g2.lm[1]))
    m1 = tuple(a - b for a, b in zip(lcm, g1.lm[1]))
    m2 = tuple(a - b for a, b in zip(lcm, g2.lm[1]))
    s = _sub_multiple({}, -g2.lc, m1, g1.terms)
    s = _sub_multiple(s, g1.lc, m2, g2.terms)
    return s, m1, m2


def _nf(f, basis, order, domain, nvars, track=False, tail=False):
    """Mora normal form of ``f`` against the list of ``_Elt`` ``basis``.

    Returns ``(r, u, a)`` with ``u * f = r + sum(a[i] * basis[i])`` where ``u`` is a
    unit (constant term nonzero).  ``u`` and ``a`` are only maintained when
    ``track`` is set.  The reducer of minimal ecart is chosen, ties broken by
    position in the list; when the reducer's ecart exceeds the current
    ecart, the current element joins the reducer set.
    """
    mkey = _mkey(order)
    u = _one(nvars, domain) if track else None
    a = {}
    if not f:
        return {}, u, a
    h = f
    reducers = [(g, i) for i, g in enumerate(basis)]
    while h:
        cur = _Elt(h, mkey)
        best = None
        for g, tag in reducers:
            if g.lm[0] == cur.lm[0] and _divides(g.lm[1], cur.lm[1]):
                if best is None or g.ecart < best[0].ecart:
                    best = (g, tag)
                    if g.ecart == 0:
                        break
        if best is None:
            break
        g, tag = best
        if g.ecart > cur.ecart:
            reducers.append((cur, ("h", u, a)))
        m = tuple(x - y for x, y in zip(cur.lm[1], g.lm[1]))
        k = cur.lc / g.lc
        h = _sub_multiple(h, k, m, g.terms)
        if track:
            if isinstance(tag, int):
                a = dict(a)
                a[tag] = _sub_multiple(a.get(tag, {}), -k, m, _one(nvars, domain))
            else:
                _, uj, aj = tag
                u = _sub_multiple(u, k, m, uj)
                a = dict(a)
                for i, p in aj.items():
                    a[i] = _sub_multiple(a.get(i, {}), k, m, p)
    if h and tail and order.is_local:
        h, a = _tail_reduce(h, basis, order, domain, nvars, a, track)
    if track:
        a = {i: p for i, p in a.items() if p}
    return h, u, a


def _tail_reduce(h, basis, order, domain, nvars, a, track, skip=None):
    # Only ecart-zero (homogeneous) reducers are used on tails: they keep the
    # degree fixed, so the reduction terminates.
    mkey = _mkey(order)
    flat = [(i, g) for i, g in enumerate(basis) if g.ecart == 0 and i != skip]
    if not flat:
        return h, a
    lead = max(h, key=mkey)
    done = set()
    while True:
        cand = [t for t in h if t != lead and t not in done]
        if not cand:
            break
        t = max(cand, key=mkey)
        for i, g in flat:
            if g.lm[0] == t[0] and _divides(g.lm[1], t[1]):
                m = tuple(x - y for x, y in zip(t[1], g.lm[1]))
                k = h[t] / g.lc
                h = _sub_multiple(h, k, m, g.terms)
                if track:
                    a = dict(a)
                    a[i] = _sub_multiple(a.get(i, {}), -k, m, _one(nvars, domain))
                break
        else:
            done.add(t)
    return h, a


def _standard(inputs, order, domain, nvars, rank, track=False):
    """Mora's standard basis algorithm.

    Returns ``(G, reps)``: ``G`` a list of ``_Elt`` forming a standard basis of
    the submodule generated by ``inputs``; when tracking, ``reps[k]`` expresses
    ``G[k]`` as a polynomial combination ``{input index: coefficient}``.
    """
    mkey = _mkey(order)
    G, reps, heap = [], [], []

    def add(elt, rep):
        idx = len(G)
        for j, g in enumerate(G):
            if g.lm[0] != elt.lm[0]:
                continue
            if rank == 1 and all(x == 0 or y == 0 for x, y in zip(g.lm[1], elt.lm[1])):
                continue  # coprime leading monomials: product criterion
            lcm = tuple(max(x, y) for x, y in zip(g.lm[1], elt.lm[1]))
            heapq.heappush(heap, (sum(lcm), j, idx))
        G.append(elt)
        reps.append(rep)

    for i, f in enumerate(inputs):
        if f:
            add(_Elt(dict(f), mkey), {i: _one(nvars, domain)} if track else None)
    while heap:
        _, i, j = heapq.heappop(heap)
        s, m1, m2 = _spoly(G[i], G[j])
        r, u, a = _nf(s, G, order, domain, nvars, track=track)
        if not r:
            continue
        rep = None
        if track:
            rep = _combine_rep(
                [(_sub_multiple({}, -G[j].lc, m1, u), reps[i]), (_sub_multiple({}, G[i].lc, m2, u), reps[j])]
                + [(_neg(p), reps[k]) for k, p in a.items()]
            )
        add(_Elt(r, mkey), rep)
    return G, reps


def _neg(p):
    return {t: -v for t, v in p.items()}


def _combine_rep(pairs):
    """Sum of ``coef * rep`` where rep maps input index -> scalar polynomial."""
    out = {}
    for coef, rep in pairs:
        if not coef:
            continue
        for idx, p in rep.items():
            out[idx] = _padd(out.get(idx, {}), _pmul(coef, p))
    return {i: p for i, p in out.items() if p}


def _minimal_positions(G):
    keep = []
    for i, g in enumerate(G):
        redundant = False
        for j, h in enumerate(G):
            if j == i or h.lm[0] != g.lm[0] or not _divides(h.lm[1], g.lm[1]):
                continue
            if h.lm != g.lm or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(i)
    return keep


def _finish(G, order, domain, nvars):
    """Minimal, monic, tail-reduced basis sorted by decreasing leading term."""
    mkey = _mkey(order)
    G = [G[i] for i in _minimal_positions(G)]
    G = [_Elt({t: v / g.lc for t, v in g.terms.items()}, mkey) for g in G]
    if order.is_local:
        out = []
        for idx, g in enumerate(G):
            h, _ = _tail_reduce(g.terms, G, order, domain, nvars, {}, False, skip=idx)
            out.append(_Elt(h, mkey))
        G = out
    G.sort(key=lambda g: mkey(g.lm), reverse=True)
    return G


# ---------------------------------------------------------------- conversions


def _poly_terms(p):
    return {(0, e): c for e, c in p.terms.items()}


def _terms_poly(terms, vars, domain):
    return Poly(vars, domain, {e: c for (_, e), c in terms.items()})


def _vec_terms(vec):
    out = {}
    for c, p in enumerate(vec):
        for e, v in p.terms.items():
            out[(c, e)] = v
    return out


def _terms_vec(terms, rank, vars, domain):
    parts = [dict() for _ in range(rank)]
    for (c, e), v in terms.items():
        parts[c][e] = v
    return tuple(Poly(vars, domain, p) for p in parts)


def _ambient(polys):
    first = polys[0]
    for p in polys[1:]:
        if p.vars != first.vars or p.domain != first.domain:
            raise AmbientMismatch("all inputs must share variables and field")
    return first.vars, first.domain


# ---------------------------------------------------------------- ideals


def mora_normal_form(f, G, order=DS):
    """Normal form of ``f`` with respect to the standard basis ``G``.

    The result ``r`` satisfies ``u*f - r in <G>`` for a unit ``u``; it is
    zero exactly when ``f`` lies in the ideal of the local ring. Tail terms
    are additionally reduced by the homogeneous members of ``G``.
    """
    if not G:
        raise ValueError("normal form needs a nonempty basis")
    vars, domain = _ambient([f, *G])
    mkey = _mkey(order)
    basis = [_Elt(_poly_terms(g), mkey) for g in G if g]
    r, _, _ = _nf(_poly_terms(f), basis, order, domain, len(vars), tail=True)
    return _terms_poly(r, vars, domain)


def std_basis(gens, order=DS):
    """Reduced standard basis of the ideal generated by ``gens`` in the local ring."""
    gens = list(gens)
    if not gens:
        return []
    vars, domain = _ambient(gens)
    for g in gens:
        if g.constant_term():
            raise ConstantTermPresent(f"generator {g} has a nonzero constant term")
    G, _ = _standard([_poly_terms(g) for g in gens], order, domain, len(vars), 1)
    return [_terms_poly(g.terms, vars, domain) for g in _finish(G, order, domain, len(vars))]


def leading_monomials(G, order=DS):
    return [g.leading_term(order)[0] for g in G if g]


def syzygies(G, order=DS):
    """Generators of the syzygy module of a standard basis ``G`` (Schreyer).

    Each S-polynomial is reduced to zero with a tracked standard
    representation ``u*spoly = sum a_k g_k``; the resulting vectors generate all
    relations among the ``g_i``.  Raises ``NotStandardBasis`` if some S-polynomial
    has a nonzero normal form.
    """
    G = list(G)
    if not G:
        return []
    vars, domain = _ambient(G)
    mkey = _mkey(order)
    elts = [_Elt(_poly_terms(g), mkey) for g in G]
    out = _schreyer(elts, order, domain, len(vars))
    return [tuple(_terms_poly(v.get(i, {}), vars, domain) for i in range(len(G))) for v in out]


def _schreyer(elts, order, domain, nvars):
    out = []
    for j in range(len(elts)):
        for i in range(j):
            gi, gj = elts[i], elts[j]
            if gi.lm[0] != gj.lm[0]:
                continue
            s, m1, m2 = _spoly(gi, gj)
            r, u, a = _nf(s, elts, order, domain, nvars, track=True)
            if r:
                raise NotStandardBasis(f"S-polynomial of elements {i} and {j} does not reduce to zero")
            vec = {i: _sub_multiple({}, -gj.lc, m1, u), j: _sub_multiple({}, gi.lc, m2, u)}
            for k, p in a.items():
                vec[k] = _padd(vec.get(k, {}), p, sign=-1)
            vec = {k: p for k, p in vec.items() if p}
            if vec:
                out.append(vec)
    return out


def _general_syzygies(inputs, order, domain, nvars, rank):
    """Syzygies of arbitrary vectors: Schreyer on a standard basis, then lifted back."""
    G, reps = _standard(inputs, order, domain, nvars, rank, track=True)
    keep = _minimal_positions(G)
    G = [G[i] for i in keep]
    reps = [reps[i] for i in keep]
    out = []
    for s in _schreyer(G, order, domain, nvars):
        v = _combine_rep([(p, reps[k]) for k, p in s.items()])
        if v:
            out.append(v)
    for idx, f in enumerate(inputs):
        if not f:
            out.append({idx: _one(nvars, domain)})
            continue
        r, u, a = _nf(f, G, order, domain, nvars, track=True)
        assert not r, "input must reduce to zero against its own standard basis"
        v = _combine_rep([(u, {idx: _one(nvars, domain)})] + [(_neg(p), reps[k]) for k, p in a.items()])
        if v:
            out.append(v)
    return out


def syzygies_of_generators(gens, order=DS):
    """Generators of all relations among arbitrary polynomials ``gens``."""
    gens = list(gens)
    vars, domain = _ambient(gens)
    vecs = _general_syzygies([_poly_terms(g) for g in gens], order, domain, len(vars), 1)
    return [tuple(_terms_poly(v.get(i, {}), vars, domain) for i in range(len(gens))) for v in vecs]


def ideal_contains(G, f, order=DS):
    """Membership of ``f`` in the ideal with standard basis ``G``."""
    if not f:
        return True
    if not G:
        return False
    return mora_normal_form(f, G, order).is_zero()


# ---------------------------------------------------------------- modules


class Module:
    """Submodule of the free module of rank ``rank`` over the local ring.

    ``gens`` are tuples of ``Poly`` of length ``rank``.  The standard basis is
    computed on first use.
    """

    def __init__(self, gens, rank, vars, domain, order=DS):
        self.rank = rank
        self.vars = tuple(vars)
        self.domain = domain
        self.order = order
        self.gens = [tuple(g) for g in gens]
        for g in self.gens:
            if len(g) != rank:
                raise AmbientMismatch("vector length differs from module rank")
        self._basis = None

    @property
    def basis(self):
        if self._basis is None:
            G, _ = _standard(
                [_vec_terms(g) for g in self.gens], self.order, self.domain, len(self.vars), self.rank
            )
            self._basis = _finish(G, self.order, self.domain, len(self.vars))
        return self._basis

    def reduce(self, vec):
        r, _, _ = _nf(_vec_terms(vec), self.basis, self.order, self.domain, len(self.vars), tail=True)
        return _terms_vec(r, self.rank, self.vars, self.domain)

    def contains(self, vec):
        return all(p.is_zero() for p in self.reduce(vec))

    def basis_vectors(self):
        return [_terms_vec(g.terms, self.rank, self.vars, self.domain) for g in self.basis]


def module_syzygies(vectors, rank, vars, domain, order=DS, keep=None):
    """Generators of ``{a : sum a_i v_i = 0}`` for vectors in a free module.

    With ``keep`` only the first ``keep`` coordinates of each syzygy are returned.
    """
    inputs = [_vec_terms(v) for v in vectors]
    out = _general_syzygies(inputs, order, domain, len(vars), rank)
    width = len(vectors) if keep is None else keep
    return [tuple(_terms_poly(v.get(i, {}), vars, domain) for i in range(width)) for v in out]


def standard_basis_terms(gens, order, vars, domain):
    """Raw standard basis (no constant-term check) used for eliminations."""
    G, _ = _standard([_poly_terms(g) for g in gens], order, domain, len(vars), 1)
    return [_terms_poly(g.terms, vars, domain) for g in _finish(G, order, domain, len(vars))]
