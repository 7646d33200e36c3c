"""Sparse square matrices over exact scalars (rationals or jets).

Storage is a dict of rows, each row a dict ``col -> value`` with no
explicit zeros.  All operations return new matrices.
"""
from __future__ import annotations

from gmpy2 import mpq

from .exactring import Jet, format_rational, jet_invert, to_rational


class Singular(ArithmeticError):
    pass


class SparseMatrix:
    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows=None):
        self.n = n
        self.rows = rows if rows is not None else {}

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, n: int, scalar=1):
        s = to_rational(scalar) if not isinstance(scalar, Jet) else scalar
        if not s:
            return cls(n)
        return cls(n, {i: {i: s} for i in range(n)})

    @classmethod
    def zero(cls, n: int):
        return cls(n)

    @classmethod
    def from_entries(cls, n: int, entries):
        rows = {}
        for (i, j), v in entries.items() if isinstance(entries, dict) else entries:
            if v:
                rows.setdefault(i, {})
                rows[i][j] = rows[i].get(j, 0) + v
                if not rows[i][j]:
                    del rows[i][j]
                    if not rows[i]:
                        del rows[i]
        return cls(n, rows)

    @classmethod
    def from_dense(cls, mat):
        n = len(mat)
        rows = {}
        for i, r in enumerate(mat):
            d = {j: (v if isinstance(v, Jet) else to_rational(v)) for j, v in enumerate(r) if v}
            if d:
                rows[i] = d
        return cls(n, rows)

    # -- basic algebra ------------------------------------------------
    def copy(self):
        return SparseMatrix(self.n, {i: dict(r) for i, r in self.rows.items()})

    def __add__(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.get(i)
            if tgt is None:
                rows[i] = dict(r)
                continue
            for j, v in r.items():
                nv = tgt.get(j, 0) + v
                if nv:
                    tgt[j] = nv
                else:
                    tgt.pop(j, None)
            if not tgt:
                del rows[i]
        return SparseMatrix(self.n, rows)

    def __neg__(self):
        return SparseMatrix(self.n, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return SparseMatrix(self.n)
        out = {}
        for i, r in self.rows.items():
            d = {}
            for j, v in r.items():
                w = v * c
                if w:
                    d[j] = w
            if d:
                out[i] = d
        return SparseMatrix(self.n, out)

    def __matmul__(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        orows = other.rows
        out = {}
        for i, r in self.rows.items():
            acc = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return SparseMatrix(self.n, out)

    def kron(self, other):
        n2 = other.n
        out = {}
        for i1, r1 in self.rows.items():
            for i2, r2 in other.rows.items():
                d = {}
                for j1, a in r1.items():
                    base = j1 * n2
                    for j2, b in r2.items():
                        w = a * b
                        if w:
                            d[base + j2] = w
                if d:
                    out[i1 * n2 + i2] = d
        return SparseMatrix(self.n * n2, out)

    def commutator(self, other):
        return self @ other - other @ self

    # -- inspection ---------------------------------------------------
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def get(self, i, j):
        return self.rows.get(i, {}).get(j, 0)

    def entries(self):
        for i in sorted(self.rows):
            r = self.rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.n == other.n and (self - other).is_zero()

    def __hash__(self):
        raise TypeError("SparseMatrix is unhashable")

    def to_dense(self):
        m = [[mpq(0)] * self.n for _ in range(self.n)]
        for i, j, v in self.entries():
            m[i][j] = v
        return m

    def map_entries(self, f):
        out = {}
        for i, r in self.rows.items():
            d = {}
            for j, v in r.items():
                w = f(v)
                if w:
                    d[j] = w
            if d:
                out[i] = d
        return SparseMatrix(self.n, out)

    def density(self) -> float:
        return self.nnz() / float(self.n * self.n) if self.n else 0.0

    def to_triplets(self):
        def fmt(v):
            return v.to_json() if isinstance(v, Jet) else format_rational(v)
        return [[i, j, fmt(v)] for i, j, v in self.entries()]

    def __repr__(self):
        return f"SparseMatrix(n={self.n}, nnz={self.nnz()})"

    # -- inverse ------------------------------------------------------
    def inverse(self):
        """Exact Gauss-Jordan inverse over rationals or jets.

        Jet pivots must have a nonzero constant term.
        """
        n = self.n
        a = {i: dict(self.rows.get(i, {})) for i in range(n)}
        inv = {i: {i: mpq(1)} for i in range(n)}
        for c in range(n):
            p = None
            for r in range(c, n):
                v = a[r].get(c)
                if v and (not isinstance(v, Jet) or v.coeffs[0]):
                    p = r
                    break
            if p is None:
                raise Singular(f"no usable pivot in column {c}")
            if p != c:
                a[c], a[p] = a[p], a[c]
                inv[c], inv[p] = inv[p], inv[c]
            piv = a[c][c]
            ip = jet_invert(piv) if isinstance(piv, Jet) else 1 / piv
            a[c] = {j: v * ip for j, v in a[c].items()}
            inv[c] = {j: v * ip for j, v in inv[c].items()}
            ac, ic = a[c], inv[c]
            for r in range(n):
                if r == c:
                    continue
                f = a[r].get(c)
                if not f:
                    continue
                ar, ir = a[r], inv[r]
                for j, v in ac.items():
                    w = ar.get(j, 0) - f * v
                    if w:
                        ar[j] = w
                    else:
                        ar.pop(j, None)
                for j, v in ic.items():
                    w = ir.get(j, 0) - f * v
                    if w:
                        ir[j] = w
                    else:
                        ir.pop(j, None)
        return SparseMatrix(n, {i: r for i, r in inv.items() if r})
