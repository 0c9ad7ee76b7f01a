"""Exact linear algebra helpers on top of sympy's DomainMatrix."""

from sympy.polys.matrices import DomainMatrix


def rref(rows, ncols, domain):
    """Reduced row echelon form of ``rows`` (lists of field elements).

    Returns ``(nonzero_rows, pivots)``; pivots are column indices, leftmost first.
    """
    if not rows or ncols == 0:
        return [], ()
    m = DomainMatrix([list(r) for r in rows], (len(rows), ncols), domain)
    red, pivots = m.rref()
    dense = red.to_list()
    return [dense[i] for i in range(len(pivots))], tuple(pivots)


def rank(rows, ncols, domain):
    return len(rref(rows, ncols, domain)[1])


def nullspace(rows, ncols, domain):
    """Basis of ``{v : rows * v = 0}`` as a list of coordinate lists."""
    if ncols == 0:
        return []
    if not rows:
        return [[domain.one if i == j else domain.zero for j in range(ncols)] for i in range(ncols)]
    m = DomainMatrix([list(r) for r in rows], (len(rows), ncols), domain)
    return m.nullspace().to_list()


def reduce_against(vec, echelon, pivots, domain):
    """Subtract the RREF rows so that ``vec`` vanishes on every pivot column."""
    v = list(vec)
    for row, p in zip(echelon, pivots):
        c = v[p]
        if c:
            v = [a - c * b for a, b in zip(v, row)]
    return v


def in_span(vec, echelon, pivots, domain):
    return not any(reduce_against(vec, echelon, pivots, domain))


def matmul(a, b, domain):
    """Product of two matrices given as lists of rows."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [domain.zero] * cols
        for k in range(inner):
            c = row[k]
            if c:
                bk = b[k]
                for j in range(cols):
                    acc[j] += c * bk[j]
        out.append(acc)
    return out
