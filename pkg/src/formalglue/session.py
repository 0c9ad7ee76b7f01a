"""Session documents: a small line-based language naming rings, maps, atlases and gluings.

Grammar (one statement per line; a statement continues onto following lines
while a bracket is open; ``#`` starts a comment)::

    field QQ | field GF(p)
    option (degree_bound | poincare_n | truncation) INT
    ring NAME = k[[v1, ..., vn]] / (poly, ...)      # or k[[...]] alone, or just k
    map NAME : RING -> RING { var -> poly ; ... }     # unlisted variables map to 0
    atlas NAME = { CHART : RING , ... }
    immersion NAME : ATLAS -> ATLAS { ZCHART -> XCHART via MAP ; ... }
    glue NAME = ATLAS , ATLAS along ATLAS by IMMERSION , IMMERSION
    module NAME over RING = residue | free INT | coker [ [poly, ...], ... ]

In ``immersion a : Z -> X``, each map goes from the X-chart ring to the
Z-chart ring (the comorphism). A ``coker`` lists relation vectors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .errors import FormalGlueError, ParseError, SessionError, UndefinedName
from .fiber import SurjectionSpec
from .gluing import Atlas, Chart, ClosedImmersionSpec
from .local_ring import LocalRingPresentation
from .poly import field_from_label, field_label, parse_poly
from .resolution import ModulePresentation

OPTION_DEFAULTS = {"degree_bound": 8, "poincare_n": 5, "truncation": 4}
KEYWORDS = {"field", "option", "ring", "map", "atlas", "immersion", "glue", "module"}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_INT = re.compile(r"\d+")


@dataclass
class RingDecl:
    name: str
    vars: tuple
    gens: tuple


@dataclass
class MapDecl:
    name: str
    source: str
    target: str
    images: tuple


@dataclass
class AtlasDecl:
    name: str
    charts: tuple


@dataclass
class ImmersionDecl:
    name: str
    source: str
    target: str
    pairs: tuple


@dataclass
class GlueDecl:
    name: str
    X: str
    Y: str
    Z: str
    alpha: str
    beta: str


@dataclass
class ModuleDecl:
    name: str
    ring: str
    kind: str
    rank: int = 0
    relations: tuple = ()


@dataclass
class SessionDocument:
    field: str = "QQ"
    options: dict = dc_field(default_factory=lambda: dict(OPTION_DEFAULTS))
    statements: list = dc_field(default_factory=list)
    objects: dict = dc_field(default_factory=dict, compare=False, repr=False)

    def decls(self, cls):
        return [s for s in self.statements if isinstance(s, cls)]

    def find(self, name):
        return next((s for s in self.statements if s.name == name), None)


def _norm(text):
    return " ".join(text.split())


# ---------------------------------------------------------------- scanning


class _Cursor:
    def __init__(self, text, start, end, line_starts):
        self.text = text
        self.pos = start
        self.end = end
        self.line_starts = line_starts

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = 0
        for i, s in enumerate(self.line_starts):
            if s <= pos:
                line = i
        return line + 1, pos - self.line_starts[line] + 1

    def error(self, msg, pos=None, cls=ParseError):
        line, col = self.where(pos)
        return cls(msg, line, col)

    def skip(self):
        while self.pos < self.end:
            ch = self.text[self.pos]
            if ch == "#":
                while self.pos < self.end and self.text[self.pos] != "\n":
                    self.pos += 1
            elif ch.isspace():
                self.pos += 1
            else:
                break

    def at_end(self):
        self.skip()
        return self.pos >= self.end

    def peek(self, lit):
        self.skip()
        return self.text.startswith(lit, self.pos) and self.pos + len(lit) <= self.end

    def expect(self, lit):
        if not self.peek(lit):
            found = self.text[self.pos : self.pos + 1] if self.pos < self.end else "end of statement"
            raise self.error(f"expected {lit!r}, found {found!r}")
        self.pos += len(lit)

    def keyword(self, word):
        self.skip()
        m = _IDENT.match(self.text, self.pos, self.end)
        if m and m.group() == word:
            self.pos = m.end()
            return True
        return False

    def ident(self, what="name"):
        self.skip()
        m = _IDENT.match(self.text, self.pos, self.end)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(), m.start()

    def integer(self):
        self.skip()
        m = _INT.match(self.text, self.pos, self.end)
        if not m:
            raise self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def poly(self, stops):
        """Raw text of a polynomial running until a stop character at bracket depth 0."""
        self.skip()
        start, depth = self.pos, 0
        while self.pos < self.end:
            ch = self.text[self.pos]
            if ch == "#":
                break
            if depth == 0 and ch in stops:
                break
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            self.pos += 1
        raw = self.text[start : self.pos]
        if not raw.strip():
            raise self.error("expected a polynomial", start)
        return _norm(raw), start


def _statements(text):
    """Split into (start, end) spans, joining lines while brackets are open."""
    spans, depth, start, i, n = [], 0, 0, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth = max(depth - 1, 0)
        elif ch == "\n" and depth == 0:
            spans.append((start, i))
            start = i + 1
        i += 1
    spans.append((start, n))
    return spans


# ---------------------------------------------------------------- parsing


class _Parser:
    def __init__(self, text):
        self.text = text
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", text)]
        self.doc = SessionDocument()
        self.names = {}
        self.domain = field_from_label("QQ")
        self.field_set = False

    def run(self):
        for start, end in _statements(self.text):
            c = _Cursor(self.text, start, end, self.line_starts)
            if c.at_end():
                continue
            word, pos = c.ident("statement keyword")
            if word not in KEYWORDS:
                raise c.error(f"unknown statement {word!r}", pos)
            getattr(self, "_" + word)(c)
            if not c.at_end():
                raise c.error("unexpected text after statement")
        return self.doc

    def _define(self, c, name, pos, kind, decl, obj):
        if name in self.names:
            raise c.error(f"{name!r} is already defined", pos)
        self.names[name] = kind
        self.doc.statements.append(decl)
        self.doc.objects[name] = obj

    def _lookup(self, c, name, pos, kind):
        if self.names.get(name) != kind:
            raise c.error(f"undefined {kind} {name!r}", pos, UndefinedName)
        return self.doc.objects[name]

    def _wrap(self, c, pos, fn):
        try:
            return fn()
        except SessionError as exc:
            if exc.line is None:
                line, col = c.where(pos + max((exc.column or 1) - 1, 0))
                raise type(exc)(exc.message, line, col) from exc
            raise
        except FormalGlueError as exc:
            line, col = c.where(pos)
            new = type(exc)(f"line {line}, column {col}: {exc}")
            new.line, new.column = line, col
            raise new from exc

    def _field(self, c):
        if self.field_set or self.doc.statements:
            raise c.error("field must be declared once, before any definitions")
        c.skip()
        start = c.pos
        m = re.compile(r"[^\s#]+").match(self.text, c.pos, c.end)
        label = m.group() if m else ""
        c.pos = m.end() if m else c.pos
        self.domain = self._wrap(c, start, lambda: field_from_label(label))
        self.doc.field = field_label(self.domain)
        self.field_set = True

    def _option(self, c):
        key, pos = c.ident("option name")
        if key not in OPTION_DEFAULTS:
            raise c.error(f"unknown option {key!r}", pos)
        value = c.integer()
        if value < 1:
            raise c.error("option values must be positive", pos)
        self.doc.options[key] = value

    def _ring(self, c):
        name, pos = c.ident("ring name")
        c.expect("=")
        if not c.keyword("k"):
            raise c.error("expected 'k'")
        vars, gens = [], []
        if c.peek("[["):
            c.expect("[[")
            if not c.peek("]]"):
                while True:
                    v, vpos = c.ident("variable")
                    if v in vars:
                        raise c.error(f"repeated variable {v!r}", vpos)
                    vars.append(v)
                    if not c.peek(","):
                        break
                    c.expect(",")
            c.expect("]]")
            if c.peek("/"):
                c.expect("/")
                c.expect("(")
                while True:
                    gens.append(c.poly(",)"))
                    if not c.peek(","):
                        break
                    c.expect(",")
                c.expect(")")
        polys = []
        for text, gpos in gens:
            polys.append(self._wrap(c, gpos, lambda t=text: parse_poly(t, tuple(vars), self.domain)))
        for p, (_, gpos) in zip(polys, gens):
            self._wrap(c, gpos, lambda p=p: LocalRingPresentation(vars, [p], self.domain))
        ring = LocalRingPresentation(vars, polys, self.domain)
        decl = RingDecl(name, tuple(vars), tuple(t for t, _ in gens))
        self._define(c, name, pos, "ring", decl, ring)

    def _map(self, c):
        name, pos = c.ident("map name")
        c.expect(":")
        sname, spos = c.ident("ring name")
        c.expect("->")
        tname, tpos = c.ident("ring name")
        S = self._lookup(c, sname, spos, "ring")
        T = self._lookup(c, tname, tpos, "ring")
        c.expect("{")
        images = []
        while not c.peek("}"):
            v, vpos = c.ident("variable")
            if v not in S.ambient_vars:
                raise c.error(f"undefined variable {v!r} of {sname}", vpos, UndefinedName)
            if any(v == w for w, _ in images):
                raise c.error(f"variable {v!r} mapped twice", vpos)
            c.expect("->")
            text, ppos = c.poly(";}")
            self._wrap(c, ppos, lambda t=text: parse_poly(t, T.ambient_vars, self.domain))
            images.append((v, text))
            if c.peek(";"):
                c.expect(";")
        c.expect("}")
        given = dict(images)
        polys = [parse_poly(given[v], T.ambient_vars, self.domain) if v in given else T.zero() for v in S.ambient_vars]
        f = self._wrap(c, pos, lambda: SurjectionSpec(S, T, polys))
        self._define(c, name, pos, "map", MapDecl(name, sname, tname, tuple(images)), f)

    def _atlas(self, c):
        name, pos = c.ident("atlas name")
        c.expect("=")
        c.expect("{")
        charts = []
        while True:
            ch, cpos = c.ident("chart name")
            if any(ch == x for x, _ in charts):
                raise c.error(f"chart {ch!r} repeated", cpos)
            c.expect(":")
            rname, rpos = c.ident("ring name")
            self._lookup(c, rname, rpos, "ring")
            charts.append((ch, rname))
            if not c.peek(","):
                break
            c.expect(",")
        c.expect("}")
        atlas = Atlas([Chart(ch, self.doc.objects[r]) for ch, r in charts], name=name)
        self._define(c, name, pos, "atlas", AtlasDecl(name, tuple(charts)), atlas)

    def _immersion(self, c):
        name, pos = c.ident("immersion name")
        c.expect(":")
        zname, zpos = c.ident("atlas name")
        c.expect("->")
        xname, xpos = c.ident("atlas name")
        Z = self._lookup(c, zname, zpos, "atlas")
        X = self._lookup(c, xname, xpos, "atlas")
        c.expect("{")
        pairs = []
        while not c.peek("}"):
            w, wpos = c.ident("chart name")
            if w not in Z:
                raise c.error(f"undefined chart {w!r} of {zname}", wpos, UndefinedName)
            c.expect("->")
            u, upos = c.ident("chart name")
            if u not in X:
                raise c.error(f"undefined chart {u!r} of {xname}", upos, UndefinedName)
            if not c.keyword("via"):
                raise c.error("expected 'via'")
            m, mpos = c.ident("map name")
            f = self._lookup(c, m, mpos, "map")
            if f.source != X[u].ring or f.target != Z[w].ring:
                raise c.error(f"map {m!r} does not go from chart {u} to chart {w}", mpos)
            pairs.append((w, u, m))
            if c.peek(";"):
                c.expect(";")
        c.expect("}")
        spec = self._wrap(
            c, pos,
            lambda: ClosedImmersionSpec(Z, X, {w: (u, self.doc.objects[m]) for w, u, m in pairs}, name=name),
        )
        self._define(c, name, pos, "immersion", ImmersionDecl(name, zname, xname, tuple(pairs)), spec)

    def _glue(self, c):
        name, pos = c.ident("gluing name")
        c.expect("=")
        X = c.ident("atlas name")
        c.expect(",")
        Y = c.ident("atlas name")
        if not c.keyword("along"):
            raise c.error("expected 'along'")
        Z = c.ident("atlas name")
        if not c.keyword("by"):
            raise c.error("expected 'by'")
        a = c.ident("immersion name")
        c.expect(",")
        b = c.ident("immersion name")
        objs = [self._lookup(c, n, p, "atlas") for n, p in (X, Y, Z)]
        ia = self._lookup(c, a[0], a[1], "immersion")
        ib = self._lookup(c, b[0], b[1], "immersion")
        if ia.source is not objs[2] or ia.target is not objs[0]:
            raise c.error(f"{a[0]} must go {Z[0]} -> {X[0]}", a[1])
        if ib.source is not objs[2] or ib.target is not objs[1]:
            raise c.error(f"{b[0]} must go {Z[0]} -> {Y[0]}", b[1])
        decl = GlueDecl(name, X[0], Y[0], Z[0], a[0], b[0])
        self._define(c, name, pos, "gluing", decl, (objs[0], objs[1], objs[2], ia, ib))

    def _module(self, c):
        name, pos = c.ident("module name")
        if not c.keyword("over"):
            raise c.error("expected 'over'")
        rname, rpos = c.ident("ring name")
        R = self._lookup(c, rname, rpos, "ring")
        c.expect("=")
        kind, kpos = c.ident("module kind")
        if kind == "residue":
            decl, M = ModuleDecl(name, rname, "residue"), ModulePresentation.residue_field(R)
        elif kind == "free":
            n = c.integer()
            decl, M = ModuleDecl(name, rname, "free", n), ModulePresentation.free(R, n)
        elif kind == "coker":
            c.expect("[")
            vecs = []
            while True:
                c.expect("[")
                vec = []
                while True:
                    text, ppos = c.poly(",]")
                    p = self._wrap(c, ppos, lambda t=text: parse_poly(t, R.ambient_vars, self.domain))
                    vec.append((text, p))
                    if not c.peek(","):
                        break
                    c.expect(",")
                c.expect("]")
                if vecs and len(vec) != len(vecs[0]):
                    raise c.error("relation vectors must have equal length")
                vecs.append(vec)
                if not c.peek(","):
                    break
                c.expect(",")
            c.expect("]")
            rank = len(vecs[0])
            M = ModulePresentation(R, rank, [tuple(p for _, p in v) for v in vecs])
            decl = ModuleDecl(name, rname, "coker", rank, tuple(tuple(t for t, _ in v) for v in vecs))
        else:
            raise c.error(f"unknown module kind {kind!r}", kpos)
        self._define(c, name, pos, "module", decl, M)


def parse_session(text):
    """Parse and validate a session document; the first error carries its line and column."""
    return _Parser(text).run()


def serialize(doc):
    """Canonical text for ``doc``; parsing it gives back an equal document."""
    out = [f"field {doc.field}"]
    for k in sorted(doc.options):
        out.append(f"option {k} {doc.options[k]}")
    for s in doc.statements:
        if isinstance(s, RingDecl):
            line = f"ring {s.name} = k"
            if s.vars:
                line += f"[[{', '.join(s.vars)}]]"
                if s.gens:
                    line += f" / ({', '.join(s.gens)})"
        elif isinstance(s, MapDecl):
            body = " ; ".join(f"{v} -> {p}" for v, p in s.images)
            line = f"map {s.name} : {s.source} -> {s.target} {{ {body} }}" if body else f"map {s.name} : {s.source} -> {s.target} {{ }}"
        elif isinstance(s, AtlasDecl):
            line = f"atlas {s.name} = {{ " + ", ".join(f"{ch} : {r}" for ch, r in s.charts) + " }"
        elif isinstance(s, ImmersionDecl):
            body = " ; ".join(f"{w} -> {u} via {m}" for w, u, m in s.pairs)
            line = f"immersion {s.name} : {s.source} -> {s.target} {{ {body} }}"
        elif isinstance(s, GlueDecl):
            line = f"glue {s.name} = {s.X}, {s.Y} along {s.Z} by {s.alpha}, {s.beta}"
        elif isinstance(s, ModuleDecl):
            line = f"module {s.name} over {s.ring} = {s.kind}"
            if s.kind == "free":
                line += f" {s.rank}"
            elif s.kind == "coker":
                line += " [" + ", ".join("[" + ", ".join(v) + "]" for v in s.relations) + "]"
        else:  # pragma: no cover
            raise TypeError(s)
        out.append(line)
    return "\n".join(out) + "\n"


def with_field(text, label):
    """Re-parse ``text`` with its field declaration replaced by ``label``."""
    doc = parse_session(text)
    doc.field = field_label(field_from_label(label))
    return parse_session(serialize(doc))
