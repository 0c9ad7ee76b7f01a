"""Minimal free resolutions over presented local rings, Betti numbers, Poincare series.

Modules over R = A/I are handled in the ambient A: a vector is zero in R^r when
it lies in I*A^r, and syzygies over R are syzygies over A of the given vectors
together with the generators of I*A^r, projected back.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AmbientMismatch, NoPresentation, TruncationMismatch
from .local_ring import LocalRingPresentation, edim
from .standard import Module, module_syzygies


class ModulePresentation:
    """Cokernel of the relation vectors inside the free module ``over^rank``."""

    def __init__(self, over, rank, relations=()):
        self.over = over
        self.rank = rank
        rels = []
        for v in relations:
            v = tuple(v)
            if len(v) != rank:
                raise AmbientMismatch("relation length differs from rank")
            for p in v:
                if p.vars != over.ambient_vars or p.domain != over.field:
                    raise AmbientMismatch(f"entry {p} is not in {over}")
            rels.append(v)
        self.relations = tuple(rels)

    @classmethod
    def free(cls, R, rank):
        return cls(R, rank, ())

    @classmethod
    def cyclic(cls, R, gens):
        """R/J for the ideal J generated by ``gens``."""
        return cls(R, 1, [(g,) for g in gens])

    @classmethod
    def residue_field(cls, R):
        return cls.cyclic(R, R.variables())

    def mu(self):
        """Minimal number of generators (rank minus rank of the constant parts)."""
        rank, _ = _eliminate_units(self.over, self.rank, self.relations)
        return rank

    def __repr__(self):
        return f"ModulePresentation(over={self.over}, rank={self.rank}, relations={len(self.relations)})"


@dataclass(frozen=True)
class BettiTable:
    betti: tuple

    def __getitem__(self, i):
        return self.betti[i] if i < len(self.betti) else 0


@dataclass(frozen=True)
class PoincareTruncation:
    coefficients: tuple
    N: int

    def __post_init__(self):
        if len(self.coefficients) != self.N + 1:
            raise ValueError("need exactly N+1 coefficients")


@dataclass
class FreeResolution:
    """``differentials[i-1]`` lists the columns of d_i : F_i -> F_(i-1)."""

    over: LocalRingPresentation
    betti: list
    differentials: list = field(default_factory=list)
    complete: bool = False

    @property
    def length_or_truncation(self):
        return len(self.betti) - 1

    def betti_table(self, N=None):
        b = list(self.betti)
        if N is not None:
            b = (b + [0] * (N + 1))[: N + 1]
        return BettiTable(tuple(b))


# ---------------------------------------------------------------- helpers


class _Reducer:
    """Normal forms of vectors modulo I * A^rank, with cached standard bases."""

    def __init__(self, R):
        self.R = R
        self._mods = {}

    def ideal_vectors(self, rank):
        zero = self.R.zero()
        out = []
        for g in self.R.std:
            for c in range(rank):
                out.append(tuple(g if k == c else zero for k in range(rank)))
        return out

    def reduce(self, vec):
        rank = len(vec)
        if not self.R.std:
            return tuple(vec)
        mod = self._mods.get(rank)
        if mod is None:
            mod = self._mods[rank] = Module(self.ideal_vectors(rank), rank, self.R.ambient_vars, self.R.field)
        return mod.reduce(vec)


def _is_zero(vec):
    return all(p.is_zero() for p in vec)


def _normalized(vec):
    for p in vec:
        if p:
            lc = next(iter(p.terms.values()))
            return tuple(q.scale(p.domain.one / lc) for q in vec)
    return vec


def _clean(vectors, red):
    out, seen = [], set()
    for v in vectors:
        v = red.reduce(v)
        if _is_zero(v):
            continue
        key = _normalized(v)
        if key in seen:
            continue
        seen.add(key)
        out.append(v)
    return out


def _eliminate_units(R, rank, relations, red=None):
    """Drop generators killed by a relation with a unit entry (Nakayama)."""
    red = red or _Reducer(R)
    rels = _clean(relations, red)
    while True:
        hit = next(((i, p) for i, v in enumerate(rels) for p, e in enumerate(v) if e.constant_term()), None)
        if hit is None:
            return rank, rels
        i, p = hit
        v = rels[i]
        vp = v[p]
        new = []
        for k, w in enumerate(rels):
            if k == i:
                continue
            new.append(tuple(vp * w[q] - w[p] * v[q] for q in range(rank) if q != p))
        rank -= 1
        rels = _clean(new, red)


def _syzygies_over(R, gens, rank, red):
    """Generators of the relations among ``gens`` in R^rank, as vectors of length len(gens)."""
    if not gens:
        return []
    s = len(gens)
    raw = module_syzygies(list(gens) + red.ideal_vectors(rank), rank, R.ambient_vars, R.field, keep=s)
    return _clean(raw, red)


def _minimize(gens, syz, red):
    """Remove generators that occur with a unit coefficient in some syzygy."""
    gens = list(gens)
    syz = list(syz)
    while True:
        hit = None
        for s in syz:
            for j, e in enumerate(s):
                if e.constant_term() and (hit is None or e.degree() == 0):
                    hit = (s, j)
                    if e.degree() == 0:
                        break
            if hit and hit[0][hit[1]].degree() == 0:
                break
        if hit is None:
            return gens, syz
        s, j = hit
        sj = s[j]
        kept, changed = [], []
        for t in syz:
            if t is s:
                continue
            tj = t[j]
            rest = range(len(gens))
            if tj.is_zero():
                # t_j = 0: dropping the coordinate loses nothing
                kept.append(tuple(t[k] for k in rest if k != j))
            elif sj.degree() == 0:
                c = tj.scale(sj.domain.one / sj.constant_term())
                changed.append(tuple(t[k] - c * s[k] for k in rest if k != j))
            else:
                changed.append(tuple(sj * t[k] - tj * s[k] for k in rest if k != j))
        del gens[j]
        syz = kept + _clean(changed, red)


# ---------------------------------------------------------------- operations


def minimal_resolution(M, steps):
    """Minimal free resolution of ``M`` up to homological degree ``steps``."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    R = M.over
    red = _Reducer(R)
    rank, gens = _eliminate_units(R, M.rank, M.relations, red)
    res = FreeResolution(over=R, betti=[rank])
    if rank == 0 or not gens:
        res.complete = True
        return res
    for _ in range(steps):
        syz = _syzygies_over(R, gens, rank, red)
        gens, syz = _minimize(gens, syz, red)
        res.betti.append(len(gens))
        res.differentials.append(gens)
        if not syz:
            res.complete = True
            return res
        rank, gens = len(gens), syz
    return res


def betti_numbers(M, N):
    return minimal_resolution(M, N).betti_table(N)


def poincare_series(M, N):
    return PoincareTruncation(betti_numbers(M, N).betti, N)


def poincare_residue_field(R, N):
    """Betti numbers of the residue field over ``R`` up to t^N."""
    return poincare_series(ModulePresentation.residue_field(R), N)


def first_syzygy(M):
    """Presentation of the kernel of a minimal free cover of ``M``."""
    R = M.over
    red = _Reducer(R)
    rank, gens = _eliminate_units(R, M.rank, M.relations, red)
    if not gens:
        return ModulePresentation.free(R, 0)
    syz = _syzygies_over(R, gens, rank, red)
    gens, syz = _minimize(gens, syz, red)
    return ModulePresentation(R, len(gens), syz)


def ambient_projective_dimension(R):
    A = LocalRingPresentation(R.ambient_vars, (), R.field)
    res = minimal_resolution(ModulePresentation.cyclic(A, R.ideal_gens), R.nvars + 1)
    assert res.complete, "resolutions over a regular ring are finite"
    b = list(res.betti)
    while len(b) > 1 and b[-1] == 0:
        b.pop()
    return len(b) - 1


def compose_is_zero(res):
    """d_i o d_(i+1) = 0 in the quotient ring for every consecutive pair."""
    red = _Reducer(res.over)
    for d_i, d_next in zip(res.differentials, res.differentials[1:]):
        for col in d_next:
            rank = len(d_i[0]) if d_i else 0
            acc = [res.over.zero() for _ in range(rank)]
            for coeff, v in zip(col, d_i):
                for k in range(rank):
                    acc[k] = acc[k] + coeff * v[k]
            if not _is_zero(red.reduce(tuple(acc))):
                return False
    return True


def is_minimal(res):
    return all(not p.constant_term() for d in res.differentials for v in d for p in v)


def series_product(F, G):
    if F.N != G.N:
        raise TruncationMismatch(f"truncation orders {F.N} and {G.N} differ")
    N = F.N
    out = [0] * (N + 1)
    for i, a in enumerate(F.coefficients):
        for j, b in enumerate(G.coefficients[: N + 1 - i]):
            out[i + j] += a * b
    return PoincareTruncation(tuple(out), N)


def check_domination(F, G):
    """Coefficient-wise F >= G."""
    if F.N != G.N:
        raise TruncationMismatch(f"truncation orders {F.N} and {G.N} differ")
    return all(a >= b for a, b in zip(F.coefficients, G.coefficients))


@dataclass(frozen=True)
class RecursionReport:
    lhs: tuple
    rhs: tuple
    mu: int
    holds: bool


def check_syzygy_recursion(M, N):
    """Compare P_M with mu(M) + t * P_{Omega_1} computed by a separate resolution."""
    if N < 1:
        raise ValueError("N must be >= 1")
    lhs = poincare_series(M, N).coefficients
    mu = M.mu()
    omega = first_syzygy(M)
    tail = poincare_series(omega, N - 1).coefficients
    rhs = (mu,) + tuple(tail)
    return RecursionReport(lhs=tuple(lhs), rhs=rhs, mu=mu, holds=tuple(lhs) == rhs)


@dataclass(frozen=True)
class BettiInequalityReport:
    beta1_fiber: int
    beta0_x: int
    beta1_y_of_z: int
    beta1_x: int
    holds: bool
    edim_fiber: int = None
    edim_x: int = None
    edim_holds: bool = None


def check_betti_inequality(fiber, M=None, N=2):
    """beta_1^P(M) >= beta_0^X(M) * beta_1^Y(Z) + beta_1^X(M) for a glued chart P.

    ``fiber`` is a fiber-product result carrying a presentation and the two
    projections; ``M`` is a module over its first factor (defaults to the
    residue field, in which case the embedding-dimension form is checked too).
    """
    if fiber.presentation is None:
        raise NoPresentation("the fiber product has no closed-form presentation")
    X, Y = fiber.R, fiber.S
    residue = M is None
    if residue:
        M = ModulePresentation.residue_field(X)
    if M.over != X:
        raise AmbientMismatch("module must live over the first factor")
    lifted = fiber.module_over_fiber(M)
    beta1_fiber = betti_numbers(lifted, 1)[1]
    bx = betti_numbers(M, 1)
    Z_over_Y = ModulePresentation.cyclic(Y, fiber.map_S.kernel())
    beta1_yz = betti_numbers(Z_over_Y, 1)[1]
    holds = beta1_fiber >= bx[0] * beta1_yz + bx[1]
    extra = {}
    if residue:
        ef, ex = edim(fiber.presentation), edim(X)
        extra = dict(edim_fiber=ef, edim_x=ex, edim_holds=ef >= beta1_yz + ex)
    return BettiInequalityReport(beta1_fiber, bx[0], beta1_yz, bx[1], holds, **extra)
