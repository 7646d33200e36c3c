"""Exact Gaussian elimination on sparse rational rows.

A row is a ``dict`` mapping column index to a nonzero rational.  Pivots
are the first nonzero column in index order, which makes every echelon
form below deterministic for a given input order.
"""
from __future__ import annotations

from gmpy2 import mpq

from .exactring import to_rational


def _clean(row):
    return {k: v for k, v in row.items() if v}


def _axpy(row, c, other):
    # row + c*other, in place
    for k, v in other.items():
        nv = row.get(k, 0) + c * v
        if nv:
            row[k] = nv
        else:
            row.pop(k, None)


def echelon(rows, reduced=True):
    """Return ``(basis, pivots)`` spanning the same space as ``rows``.

    Each basis row has a unit entry at its pivot; with ``reduced`` the pivot
    columns are cleared in every other row.
    """
    basis = []
    pivots = []
    for r in rows:
        r = _clean({k: to_rational(v) for k, v in r.items()})
        for b, p in zip(basis, pivots):
            c = r.get(p)
            if c:
                _axpy(r, -c, b)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {k: v * inv for k, v in r.items()}
        if reduced:
            for b in basis:
                c = b.get(p)
                if c:
                    _axpy(b, -c, r)
        # keep pivots sorted so the output order is canonical
        pos = 0
        while pos < len(pivots) and pivots[pos] < p:
            pos += 1
        basis.insert(pos, r)
        pivots.insert(pos, p)
    return basis, pivots


def rank(rows) -> int:
    return len(echelon(rows, reduced=False)[0])


def reduce(vec, basis, pivots):
    """Remainder of ``vec`` modulo an echelon basis."""
    r = _clean(dict(vec))
    for b, p in zip(basis, pivots):
        c = r.get(p)
        if c:
            _axpy(r, -c, b)
    return r


def in_span(vec, basis, pivots) -> bool:
    return not reduce(vec, basis, pivots)


def coordinates(vec, basis, pivots):
    """Coordinates of ``vec`` in a *reduced* echelon basis, or None."""
    coords = {}
    r = _clean(dict(vec))
    for i, (b, p) in enumerate(zip(basis, pivots)):
        c = r.get(p)
        if c:
            coords[i] = c
            _axpy(r, -c, b)
    if r:
        return None
    return coords


def nullspace(rows, ncols: int):
    """Basis of ``{x : row . x = 0 for every row}``."""
    basis, pivots = echelon(rows, reduced=True)
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = {free: mpq(1)}
        for b, p in zip(basis, pivots):
            c = b.get(free)
            if c:
                v[p] = -c
        out.append(v)
    return out


def dense_to_rows(mat):
    return [{j: to_rational(x) for j, x in enumerate(row) if x} for row in mat]


def det(mat) -> mpq:
    """Determinant of a dense square matrix (list of lists)."""
    n = len(mat)
    a = [[to_rational(x) for x in row] for row in mat]
    d = mpq(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return mpq(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        piv = a[c][c]
        d *= piv
        for r in range(c + 1, n):
            f = a[r][c]
            if f:
                f = f / piv
                ar, ac = a[r], a[c]
                for k in range(c, n):
                    if ac[k]:
                        ar[k] -= f * ac[k]
    return d


def inverse(mat):
    """Inverse of a dense square rational matrix; raises ZeroDivisionError if singular."""
    n = len(mat)
    a = [[to_rational(x) for x in row] + [mpq(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def matmul(a, b):
    m = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(len(b)) if a[i][k]), mpq(0))
             for j in range(m)] for i in range(len(a))]
