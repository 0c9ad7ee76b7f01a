"""Sparse multivariate polynomials over QQ or GF(p), with monomial orders.

Polynomials stand in for power series: every ideal handled by the package is
generated by polynomials, and all local computations happen in the
localization at the origin, whose completion is the power series ring.
"""

from __future__ import annotations

import re
from fractions import Fraction

from sympy import GF, QQ, isprime

from .errors import AmbientMismatch, BadField, ParseError

# ---------------------------------------------------------------- fields


def rationals():
    return QQ


def prime_field(p):
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise BadField(f"{p!r} is not a prime")
    return GF(p)


def field_from_label(label):
    """Parse ``QQ``/``q`` or ``GF(p)``/``Fp``/``F7`` into a coefficient domain."""
    text = label.strip()
    if text in ("QQ", "Q", "q", "rationals"):
        return QQ
    m = re.fullmatch(r"(?:GF\((\d+)\)|[Ff](\d+)|GF(\d+))", text)
    if not m:
        raise BadField(f"unknown field {label!r}")
    return prime_field(int(next(g for g in m.groups() if g)))


def field_label(domain):
    if domain == QQ:
        return "QQ"
    return f"GF({domain.mod})"


def format_coeff(domain, c):
    if domain == QQ:
        return str(c)
    return str(int(c) % domain.mod)


def convert(domain, value):
    """Bring an int, Fraction or domain element into ``domain``."""
    if isinstance(value, Fraction):
        return domain(value.numerator) / domain(value.denominator)
    if isinstance(value, int):
        return domain(value)
    return value


# ---------------------------------------------------------------- orders


class LocalOrder:
    """Negative degree reverse lexicographic order (``ds``).

    Lower total degree is larger, so 1 is the largest monomial and every
    variable is smaller than 1. Ties are broken reverse-lexicographically
    on the (optionally permuted) exponent vector.
    """

    is_local = True

    def __init__(self, permutation=None):
        self.permutation = tuple(permutation) if permutation is not None else None
        self._cache = {}

    def key(self, exps):
        k = self._cache.get(exps)
        if k is None:
            e = exps if self.permutation is None else tuple(exps[i] for i in self.permutation)
            k = (-sum(e), tuple(-a for a in reversed(e)))
            self._cache[exps] = k
        return k

    def __eq__(self, other):
        return type(other) is LocalOrder and other.permutation == self.permutation

    def __hash__(self):
        return hash(("ds", self.permutation))

    def __repr__(self):
        return "LocalOrder()" if self.permutation is None else f"LocalOrder({self.permutation})"


class EliminationOrder:
    """Block order: degrevlex (global) on the first ``k`` variables, ``ds`` on the rest.

    Used only internally to eliminate the first block of variables.
    """

    is_local = False

    def __init__(self, k):
        self.k = k
        self._cache = {}

    def key(self, exps):
        c = self._cache.get(exps)
        if c is None:
            a, b = exps[: self.k], exps[self.k :]
            c = (
                (sum(a), tuple(-x for x in reversed(a))),
                (-sum(b), tuple(-x for x in reversed(b))),
            )
            self._cache[exps] = c
        return c


DS = LocalOrder()


# ---------------------------------------------------------------- polynomials


class Poly:
    """Immutable sparse polynomial ``{exponent tuple: coefficient}``.

    Terms are kept sorted from largest to smallest under ``ds``; zero
    coefficients are never stored.
    """

    __slots__ = ("vars", "domain", "terms")

    def __init__(self, vars, domain, terms=None):
        self.vars = tuple(vars)
        self.domain = domain
        clean = {e: c for e, c in (terms or {}).items() if c}
        for e in clean:
            if len(e) != len(self.vars):
                raise AmbientMismatch(f"exponent {e} does not fit variables {self.vars}")
        self.terms = dict(sorted(clean.items(), key=lambda t: DS.key(t[0]), reverse=True))

    # -- constructors
    @classmethod
    def zero(cls, vars, domain):
        return cls(vars, domain)

    @classmethod
    def constant(cls, vars, domain, c):
        return cls(vars, domain, {(0,) * len(vars): convert(domain, c)})

    @classmethod
    def variable(cls, vars, domain, name):
        vars = tuple(vars)
        e = tuple(1 if v == name else 0 for v in vars)
        if sum(e) != 1:
            raise AmbientMismatch(f"{name!r} is not one of {vars}")
        return cls(vars, domain, {e: domain.one})

    @classmethod
    def monomial(cls, vars, domain, exps, c=1):
        return cls(vars, domain, {tuple(exps): convert(domain, c)})

    # -- basic queries
    @property
    def nvars(self):
        return len(self.vars)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def order(self):
        """Lowest total degree of a term (the m-adic order); -1 for zero."""
        return min((sum(e) for e in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.domain.zero)

    def linear_part(self):
        out = [self.domain.zero] * self.nvars
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[e.index(1)] = c
        return out

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def leading_term(self, order=DS):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def ecart(self, order=DS):
        if not self.terms:
            return 0
        e, _ = self.leading_term(order)
        return self.degree() - sum(e)

    def truncate(self, n):
        """Drop every term of total degree >= n."""
        return Poly(self.vars, self.domain, {e: c for e, c in self.terms.items() if sum(e) < n})

    # -- arithmetic
    def _check(self, other):
        if self.vars != other.vars or self.domain != other.domain:
            raise AmbientMismatch(f"{self.vars}/{field_label(self.domain)} vs {other.vars}/{field_label(other.domain)}")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.vars, self.domain, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, self.domain.zero) + c
        return Poly(self.vars, self.domain, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, self.domain, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        zero = self.domain.zero
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, zero) + c1 * c2
        return Poly(self.vars, self.domain, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.vars, self.domain, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        c = convert(self.domain, c)
        return Poly(self.vars, self.domain, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.domain == other.domain and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.vars, self.domain, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- ring maps and renaming
    def substitute(self, images):
        """Apply the ring map sending the i-th variable to ``images[i]``.

        ``images`` must be non-empty unless the polynomial is constant; the
        result lives in the images' ring.
        """
        if len(images) != self.nvars:
            raise AmbientMismatch("one image per variable is required")
        if not images:
            raise AmbientMismatch("target ring unknown for an empty substitution")
        target = images[0]
        acc = Poly.zero(target.vars, target.domain)
        powers = [dict() for _ in images]
        for e, c in self.terms.items():
            term = Poly.constant(target.vars, target.domain, c)
            for i, k in enumerate(e):
                if k:
                    p = powers[i].get(k)
                    if p is None:
                        p = powers[i][k] = images[i] ** k
                    term = term * p
            acc = acc + term
        return acc

    def rename(self, new_vars):
        new_vars = tuple(new_vars)
        if len(new_vars) != self.nvars:
            raise AmbientMismatch("renaming must preserve the variable count")
        return Poly(new_vars, self.domain, self.terms)

    def embed(self, new_vars):
        """View the polynomial in a larger ring whose variables contain ours."""
        new_vars = tuple(new_vars)
        idx = [new_vars.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for i, k in zip(idx, e):
                ne[i] = k
            out[tuple(ne)] = c
        return Poly(new_vars, self.domain, out)

    # -- printing
    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.terms.items():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            text = format_coeff(self.domain, c)
            neg = text.startswith("-")
            if neg:
                text = text[1:]
            if mono:
                body = mono if text == "1" else f"{text}*{mono}"
            else:
                body = text
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={self.vars})"


def poly_arith(f, g, op):
    """Exact ring arithmetic: ``op`` is one of ``add``, ``sub``, ``mul``."""
    if not isinstance(f, Poly) or not isinstance(g, Poly):
        raise TypeError("poly_arith expects two Poly values")
    f._check(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}", column=pos + 1)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", int(num), start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _PolyParser:
    # expr := ['-'|'+'] term (('+'|'-') term)*
    # term := factor (('*'|'/') factor | factor)*
    # factor := atom ('^' integer)?
    # atom := integer | variable | '(' expr ')'

    def __init__(self, text, vars, domain):
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars = tuple(vars)
        self.domain = domain

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, column=tok[2] + 1)

    def parse(self):
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        while self.peek()[:2] in (("op", "-"), ("op", "+")):
            if self.take()[1] == "-":
                sign = -sign
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind == "op" and val == "/":
                tok = self.take()
                d = self.factor()
                if d.degree() > 0 or d.is_zero():
                    raise self.error("division only by nonzero constants", tok)
                acc = acc.scale(self.domain.one / d.constant_term())
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise self.error("exponent must be a non-negative integer", tok)
            base = base ** tok[1]
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return Poly.constant(self.vars, self.domain, val)
        if kind == "name":
            if val not in self.vars:
                raise self.error(f"unknown variable {val!r}", tok)
            return Poly.variable(self.vars, self.domain, val)
        if kind == "op" and val == "(":
            p = self.expr()
            if self.take()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            return p
        if kind == "op" and val == "-":
            return -self.factor()
        raise self.error(f"unexpected {val!r}" if val is not None else "unexpected end of input", tok)


def parse_poly(text, vars, domain=QQ):
    """Parse infix syntax (``*``, ``^``, integer or rational coefficients)."""
    return _PolyParser(text, vars, domain).parse()
