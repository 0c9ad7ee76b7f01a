"""Finite atlases of presented charts and the gluing X ⊔_Z Y along closed immersions."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import AmbientMismatch, NonSurjectiveMap, NoPresentation, TrivialGluing, ZeroIdeal
from .fiber import FiberProductResult, SurjectionSpec, fiber_product
from .local_ring import LocalRingPresentation, edim, invariants, krull_dim, truncate
from .resolution import poincare_residue_field

NON_NOETHERIAN_NOTE = (
    "a non-surjective comorphism can produce a non-Noetherian gluing, "
    "as for the subring k[[x, xy, xy^2, ...]] of k[[x, y]]"
)


@dataclass(frozen=True)
class Chart:
    name: str
    ring: LocalRingPresentation


class Atlas:
    """A finite, nonempty list of charts with distinct names."""

    def __init__(self, charts, name=""):
        charts = list(charts)
        if not charts:
            raise ValueError("an atlas needs at least one chart")
        names = [c.name for c in charts]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate chart names in atlas {name!r}")
        self.name = name
        self.charts = tuple(charts)
        self._by_name = {c.name: c for c in charts}

    def __getitem__(self, name):
        return self._by_name[name]

    def __contains__(self, name):
        return name in self._by_name

    def __iter__(self):
        return iter(self.charts)

    def __len__(self):
        return len(self.charts)


class ClosedImmersionSpec:
    """Z -> X given chart by chart: each Z-chart W is paired with an X-chart U and a comorphism U -> W."""

    def __init__(self, source, target, pairing, name=""):
        self.name = name
        self.source = source
        self.target = target
        pairing = dict(pairing)
        missing = [w.name for w in source if w.name not in pairing]
        if missing:
            raise ValueError(f"immersion {name!r} does not cover chart(s) {', '.join(missing)}")
        for w, (u, f) in pairing.items():
            if w not in source or u not in target:
                raise KeyError(f"unknown chart in pairing {w} -> {u}")
            if f.source != target[u].ring or f.target != source[w].ring:
                raise AmbientMismatch(f"comorphism for {w} -> {u} does not go {u} -> {w}")
        self.pairing = pairing

    def comorphism(self, w):
        return self.pairing[w]

    def failures(self):
        """Z-charts whose comorphism is not surjective."""
        return sorted(w for w, (_, f) in self.pairing.items() if not f.is_surjective)


@dataclass
class GluedChart:
    name: str
    z_chart: str
    x_chart: str
    y_chart: str
    fiber: FiberProductResult

    @property
    def presentation(self):
        return self.fiber.presentation


@dataclass
class GluedScheme:
    X: Atlas
    Y: Atlas
    Z: Atlas
    alpha: ClosedImmersionSpec
    beta: ClosedImmersionSpec
    charts: list = field(default_factory=list)


def _check_configuration(alpha, beta):
    for spec in (alpha, beta):
        bad = spec.failures()
        if bad:
            raise NonSurjectiveMap(
                f"comorphism of {spec.name or 'immersion'} on chart {bad[0]} is not surjective; {NON_NOETHERIAN_NOTE}"
            )
    for spec in (alpha, beta):
        for w in sorted(spec.pairing):
            u, f = spec.pairing[w]
            if f.is_isomorphism():
                raise TrivialGluing(f"comorphism {u} -> {w} is an isomorphism; the fiber product is trivial")


def glue(X, Y, Z, alpha, beta):
    """One glued chart per Z-chart, the fiber product of the paired X- and Y-chart rings."""
    if alpha.source is not Z or beta.source is not Z or alpha.target is not X or beta.target is not Y:
        raise AmbientMismatch("immersions must go Z -> X and Z -> Y")
    _check_configuration(alpha, beta)
    G = GluedScheme(X, Y, Z, alpha, beta)
    for w in sorted(c.name for c in Z):
        u, a = alpha.pairing[w]
        v, b = beta.pairing[w]
        try:
            fp = fiber_product(a, b)
        except ZeroIdeal as exc:
            raise TrivialGluing(str(exc)) from exc
        G.charts.append(GluedChart(f"{u}+{v}@{w}", w, u, v, fp))
    return G


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class ChartSingularity:
    chart: str
    dim: int
    edim: int
    singular: bool
    note: str = ""


@dataclass(frozen=True)
class SingularityReport:
    entries: tuple
    has_singular_point: bool
    numeric: bool


def singularity_report(G, strict=False):
    """Flag each glued point w singular when edim > dim of the glued chart ring."""
    entries = []
    for c in G.charts:
        P = c.presentation
        if P is None:
            if strict:
                raise NoPresentation(f"chart {c.name} is known only through truncations")
            entries.append(ChartSingularity(c.name, c.fiber.dim, None, True,
                                            "singular by the gluing theorem; numeric check unavailable"))
            continue
        d, e = krull_dim(P), edim(P)
        entries.append(ChartSingularity(c.name, d, e, e > d))
    numeric = all(e.edim is not None for e in entries)
    return SingularityReport(tuple(entries), any(e.singular for e in entries), numeric)


@dataclass(frozen=True)
class NoetherianReport:
    verdict: str
    finite_type: bool
    diagnostic: str = ""


def assess_configuration(alpha, beta):
    """Non-raising verdict on a gluing configuration."""
    for spec in (alpha, beta):
        bad = spec.failures()
        if bad:
            return NoetherianReport(
                "not-noetherian-warning", False,
                f"comorphism on chart {bad[0]} is not surjective; {NON_NOETHERIAN_NOTE}",
            )
    return NoetherianReport("noetherian", True)


def noetherian_report(G):
    """Noetherian when every comorphism is a verified surjection of finitely presented charts."""
    return assess_configuration(G.alpha, G.beta)


# ---------------------------------------------------------------- checks


def pushout_commutes(G, n_max=4):
    """Both composites from the glued chart to the Z-chart agree at every truncation level."""
    for c in G.charts:
        fp = c.fiber
        for n in range(1, n_max + 1):
            pair = fp.pair_algebra(n)
            if fp.presentation is None:
                if not all(pair.contains(p) for p in pair.basis):
                    return False
                continue
            Pn = truncate(fp.presentation, n)
            M_R = Pn.map_matrix(pair.Rn, list(fp.proj_R.images))
            M_S = Pn.map_matrix(pair.Sn, list(fp.proj_S.images))
            dom = fp.R.field
            if linalg.matmul(pair.A_R, M_R, dom) != linalg.matmul(pair.A_S, M_S, dom):
                return False
    return True


def stalk_dimension_identity(G, n_max=4):
    """dim fiber = dim X-stalk + dim Y-stalk - dim Z-stalk at each level."""
    out = []
    for c in G.charts:
        for n in range(1, n_max + 1):
            pair = c.fiber.pair_algebra(n)
            rhs = pair.Rn.dimension + pair.Sn.dimension - pair.Tn.dimension
            out.append((c.name, n, pair.dimension, rhs))
    return out


def chart_summary(P, N=5):
    inv = invariants(P)
    return (inv.dim, inv.edim, inv.depth, poincare_residue_field(P, N).coefficients)


def check_symmetry(X, Y, Z, alpha, beta, N=5):
    """glue(X, Y) and glue(Y, X) give charts with equal dim, edim, depth and Betti numbers of k."""
    G1 = glue(X, Y, Z, alpha, beta)
    G2 = glue(Y, X, Z, beta, alpha)
    for c1, c2 in zip(G1.charts, G2.charts):
        if (c1.presentation is None) != (c2.presentation is None):
            return False
        if c1.presentation is None:
            continue
        if chart_summary(c1.presentation, N) != chart_summary(c2.presentation, N):
            return False
    return True


def single_chart_atlas(name, ring):
    return Atlas([Chart(name, ring)], name=name)


def simple_gluing(R, S, T, map_R, map_S):
    """X = Spf R, Y = Spf S glued along Z = Spf T (one chart each)."""
    X, Y, Z = single_chart_atlas("X", R), single_chart_atlas("Y", S), single_chart_atlas("Z", T)
    alpha = ClosedImmersionSpec(Z, X, {"Z": ("X", map_R)}, name="alpha")
    beta = ClosedImmersionSpec(Z, Y, {"Z": ("Y", map_S)}, name="beta")
    return X, Y, Z, alpha, beta


def to_residue_field(R):
    k = LocalRingPresentation((), (), R.field)
    return SurjectionSpec(R, k, [k.zero()] * R.nvars)
