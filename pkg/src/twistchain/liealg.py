"""Lie algebras by structure constants.

``build_sl`` realizes sl(N) in the basis ``{E_ij, i != j} + {H_{i,i+1}}``
with ``H_{i,k} = (E_ii - E_kk)/2``.  Small abstract algebras (Borel,
Heisenberg, the four-dimensional carriers L(alpha, beta)) are built from
bracket tables and carry a faithful 3x3 (or 2x2) matrix realization so the
tensor machinery can evaluate twists on them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from . import linalg
from .exactring import format_rational, to_rational


class ConstraintViolation(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class JacobiFailure(ArithmeticError):
    pass


@dataclass(frozen=True, order=True)
class Label:
    """Basis label.

    ``kind`` is one of ``E`` (idx=(i, j)), ``H`` (idx=(i, k)), ``HP``,
    ``HR`` (idx=(k,), 0-based link), ``Hperp`` (idx=(i,)) or ``X`` for
    generators of abstract algebras (idx=(name,)).
    """
    kind: str
    idx: tuple

    def __str__(self):
        if self.kind == "X":
            return str(self.idx[0])
        if self.kind in ("E", "H"):
            return f"{self.kind}{self.idx[0]},{self.idx[1]}"
        return f"{self.kind}{self.idx[0]}"


def E(i, j):
    return Label("E", (i, j))


def H(i, k):
    return Label("H", (i, k))


def X(name):
    return Label("X", (name,))


class LieElement:
    """Sparse vector ``{basis index: rational}`` in a fixed algebra."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs=None):
        self.algebra = algebra
        self.coeffs = {k: to_rational(v) for k, v in (coeffs or {}).items() if v}

    def __add__(self, other):
        self._check(other)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return LieElement(self.algebra, c)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LieElement(self.algebra, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, c):
        c = to_rational(c)
        return LieElement(self.algebra, {k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / to_rational(c))

    def bracket(self, other):
        self._check(other)
        return self.algebra.bracket(self, other)

    def is_zero(self):
        return not self.coeffs

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            parts.append(f"{format_rational(self.coeffs[k])}*{self.algebra.basis[k]}")
        return " + ".join(parts)


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q given by structure constants.

    ``table[(a, b)]`` for ``a < b`` is the sparse coordinate dict of
    ``[e_a, e_b]``; the rest follows from antisymmetry.  ``realization``
    optionally maps each basis index to a square matrix (list of lists)
    giving a faithful representation.
    """

    def __init__(self, name, basis, table, realization=None, check=True):
        self.name = name
        self.basis = tuple(basis)
        self.index = {lab: i for i, lab in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise ValueError("duplicate basis labels")
        self.table = {}
        for (a, b), v in table.items():
            v = {k: to_rational(c) for k, c in v.items() if c}
            if a == b:
                if v:
                    raise ConstraintViolation("[x, x] must vanish")
                continue
            if a > b:
                a, b = b, a
                v = {k: -c for k, c in v.items()}
            if v:
                self.table[(a, b)] = v
        self.realization = realization
        self.meta = {}
        if check:
            self.check_jacobi()

    @property
    def dim(self):
        return len(self.basis)

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim})"

    # -- elements -------------------------------------------------------
    def element(self, x) -> LieElement:
        if isinstance(x, LieElement):
            return x
        if isinstance(x, Label):
            if x in self.index:
                return LieElement(self, {self.index[x]: 1})
            resolver = self.meta.get("resolve")
            if resolver is not None:
                return resolver(x)
            raise KeyError(f"{x} is not a basis label of {self.name}")
        if isinstance(x, str):
            return self.element(X(x))
        if isinstance(x, dict):
            return LieElement(self, x)
        raise TypeError(f"cannot make an element from {x!r}")

    def zero(self):
        return LieElement(self)

    def basis_elements(self):
        return [LieElement(self, {i: 1}) for i in range(self.dim)]

    def bracket_basis(self, a, b):
        if a == b:
            return {}
        if a < b:
            return self.table.get((a, b), {})
        return {k: -v for k, v in self.table.get((b, a), {}).items()}

    def bracket(self, x, y):
        x, y = self.element(x), self.element(y)
        out = {}
        for a, ca in x.coeffs.items():
            for b, cb in y.coeffs.items():
                for k, v in self.bracket_basis(a, b).items():
                    out[k] = out.get(k, 0) + ca * cb * v
        return LieElement(self, out)

    def check_jacobi(self):
        n = self.dim
        for a, b, c in itertools.combinations(range(n), 3):
            acc = {}
            for (p, q, r) in ((a, b, c), (b, c, a), (c, a, b)):
                for k, v in self.bracket_basis(q, r).items():
                    for m, w in self.bracket_basis(p, k).items():
                        acc[m] = acc.get(m, 0) + v * w
            if any(acc.values()):
                raise JacobiFailure(
                    f"Jacobi fails on ({self.basis[a]}, {self.basis[b]}, {self.basis[c]})")

    def structure_constants(self):
        """Nonzero brackets as ``(a, b, c, value)`` with a < b."""
        for (a, b) in sorted(self.table):
            for c, v in sorted(self.table[(a, b)].items()):
                yield a, b, c, v

    def to_json(self):
        return {
            "name": self.name,
            "dim": self.dim,
            "basis": [str(l) for l in self.basis],
            "brackets": [[str(self.basis[a]), str(self.basis[b]), str(self.basis[c]),
                          format_rational(v)] for a, b, c, v in self.structure_constants()],
        }


# ---------------------------------------------------------------------------
# sl(N)


def n_half(N: int) -> int:
    """``n`` with N = 2n (even) or N = 2n - 1 (odd)."""
    return N // 2 if N % 2 == 0 else (N + 1) // 2


def z_max(N: int) -> int:
    """Number of links of the full peripheric chain, N - n."""
    return N - n_half(N)


def _diag_to_cartan(N, diag):
    """Coordinates (in H_{i,i+1}) of a traceless diagonal matrix."""
    tr = sum(diag, mpq(0))
    d = [to_rational(x) - tr / N for x in diag]
    out = {}
    run = mpq(0)
    for i in range(N - 1):
        run += d[i]
        if run:
            out[i] = 2 * run
    return out


@lru_cache(maxsize=None)
def build_sl(N: int) -> LieAlgebra:
    """sl(N) with basis E_ij (i != j, 1-based) followed by H_{i,i+1}."""
    if N < 2:
        raise ValueError("sl(N) needs N >= 2")
    roots = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1) if i != j]
    basis = [E(i, j) for i, j in roots] + [H(i, i + 1) for i in range(1, N)]
    idx = {lab: k for k, lab in enumerate(basis)}
    ncart = len(roots)

    def mat(lab):
        # gl(N) matrix as dict {(r, c): value}
        if lab.kind == "E":
            return {lab.idx: mpq(1)}
        i, k = lab.idx
        return {(i, i): mpq(1, 2), (k, k): mpq(-1, 2)}

    def to_coords(m):
        out = {}
        diag = [mpq(0)] * N
        for (r, c), v in m.items():
            if not v:
                continue
            if r == c:
                diag[r - 1] += v
            else:
                out[idx[E(r, c)]] = out.get(idx[E(r, c)], 0) + v
        for i, v in _diag_to_cartan(N, diag).items():
            out[ncart + i] = v
        return {k: v for k, v in out.items() if v}

    mats = [mat(l) for l in basis]
    table = {}
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            prod = {}
            for (r1, c1), v1 in mats[a].items():
                for (r2, c2), v2 in mats[b].items():
                    if c1 == r2:
                        prod[(r1, c2)] = prod.get((r1, c2), 0) + v1 * v2
                    if c2 == r1:
                        prod[(r2, c1)] = prod.get((r2, c1), 0) - v1 * v2
            coords = to_coords(prod)
            if coords:
                table[(a, b)] = coords
    realization = []
    for m in mats:
        dense = [[mpq(0)] * N for _ in range(N)]
        for (r, c), v in m.items():
            dense[r - 1][c - 1] += v
        realization.append(dense)
    g = LieAlgebra(f"sl({N})", basis, table, realization=realization)
    g.meta["N"] = N
    g.meta["resolve"] = lambda lab: _resolve_sl_label(g, lab)
    return g


def _resolve_sl_label(g, lab):
    N = g.meta["N"]
    if lab.kind == "H":
        i, k = lab.idx
        d = [0] * N
        d[i - 1] += mpq(1, 2)
        d[k - 1] -= mpq(1, 2)
        return diag_element(g, d)
    if lab.kind == "HP":
        return cartan_HP(lab.idx[0], N)
    if lab.kind == "HR":
        return cartan_HR(lab.idx[0], N)
    if lab.kind == "Hperp":
        return cartan_Hperp(lab.idx[0], N)
    raise KeyError(f"{lab} is not defined in {g.name}")


def diag_element(g, diag) -> LieElement:
    """Traceless part of ``diag(d_1..d_N)`` as an element of sl(N)."""
    N = g.meta["N"]
    if len(diag) != N:
        raise ValueError("diagonal has wrong length")
    ncart = N * N - N
    return LieElement(g, {ncart + i: v for i, v in _diag_to_cartan(N, diag).items()})


def diagonal_of(x: LieElement):
    """Diagonal entries of a Cartan element of sl(N) (traceless)."""
    g = x.algebra
    N = g.meta["N"]
    ncart = N * N - N
    d = [mpq(0)] * N
    for k, v in x.coeffs.items():
        if k < ncart:
            raise ValueError("element is not diagonal")
        i = k - ncart
        d[i] += v / 2
        d[i + 1] -= v / 2
    return d


def _check_link(k, N):
    if not (0 <= k and k + 1 < N - k):
        raise IndexOutOfRange(f"link index k={k} invalid for N={N}")


def cartan_HP(k: int, N: int) -> LieElement:
    """Peripheric Cartan element E_{k+1,k+1} - (1/N) * identity."""
    _check_link(k, N)
    d = [mpq(-1, N)] * N
    d[k] += 1
    return diag_element(build_sl(N), d)


def cartan_HR(k: int, N: int) -> LieElement:
    _check_link(k, N)
    g = build_sl(N)
    return g.element(H(k + 1, N - k)) - cartan_HP(k, N)


def cartan_Hperp(i: int, N: int) -> LieElement:
    """((N-2i)/N) * identity - sum_{m=i+1}^{N-i} E_mm (already traceless)."""
    n = n_half(N)
    if not 1 <= i <= n - 1:
        raise IndexOutOfRange(f"H_perp index i={i} invalid for N={N}")
    d = [mpq(N - 2 * i, N)] * N
    for m in range(i + 1, N - i + 1):
        d[m - 1] -= 1
    return diag_element(build_sl(N), d)


def root_vector(N, i, j) -> LieElement:
    return build_sl(N).element(E(i, j))


# ---------------------------------------------------------------------------
# small abstract algebras


def abstract_algebra(name, names, brackets, realization=None):
    """Algebra on generators ``names`` with ``brackets[(x, y)] = {z: c}``."""
    basis = [X(s) for s in names]
    pos = {s: i for i, s in enumerate(names)}
    table = {}
    for (x, y), val in brackets.items():
        table[(pos[x], pos[y])] = {pos[z]: c for z, c in val.items()}
    real = None
    if realization is not None:
        real = [realization[s] for s in names]
    return LieAlgebra(name, basis, table, realization=real)


def _dense(n, entries):
    m = [[mpq(0)] * n for _ in range(n)]
    for (r, c), v in entries.items():
        m[r][c] = to_rational(v)
    return m


def build_L(alpha, beta) -> LieAlgebra:
    """Four-dimensional carrier L(alpha, beta) on {H, A, B, E}."""
    alpha, beta = to_rational(alpha), to_rational(beta)
    if alpha + beta != 1:
        raise ConstraintViolation("L(alpha, beta) requires alpha + beta = 1")
    brackets = {
        ("H", "E"): {"E": 1},
        ("H", "A"): {"A": alpha},
        ("H", "B"): {"B": beta},
        ("A", "B"): {"E": 1},
    }
    # H -> diag(alpha, 0, -beta), A -> e12, B -> e23, E -> e13
    real = {
        "H": _dense(3, {(0, 0): alpha, (2, 2): -beta}),
        "A": _dense(3, {(0, 1): 1}),
        "B": _dense(3, {(1, 2): 1}),
        "E": _dense(3, {(0, 2): 1}),
    }
    g = abstract_algebra(f"L({format_rational(alpha)},{format_rational(beta)})",
                         ["H", "A", "B", "E"], brackets, real)
    g.meta["alpha"], g.meta["beta"] = alpha, beta
    return g


def build_borel() -> LieAlgebra:
    """Two-dimensional Borel algebra [H, E] = E."""
    real = {"H": _dense(2, {(0, 0): 1}), "E": _dense(2, {(0, 1): 1})}
    return abstract_algebra("B", ["H", "E"], {("H", "E"): {"E": 1}}, real)


def build_heisenberg() -> LieAlgebra:
    real = {"A": _dense(3, {(0, 1): 1}), "B": _dense(3, {(1, 2): 1}),
            "E": _dense(3, {(0, 2): 1})}
    return abstract_algebra("Heis", ["A", "B", "E"], {("A", "B"): {"E": 1}}, real)


def build_abelian(d: int) -> LieAlgebra:
    names = [f"x{i}" for i in range(1, d + 1)]
    return abstract_algebra(f"ab({d})", names, {})


# ---------------------------------------------------------------------------
# subalgebras and invariants


def span_rows(elements):
    return [dict(x.coeffs) for x in elements]


def subalgebra_closure(g, seeds):
    """Echelon basis of the smallest bracket-closed subspace containing ``seeds``."""
    seeds = [g.element(s) for s in seeds]
    if not seeds:
        raise ValueError("need at least one seed")
    basis, piv = linalg.echelon(span_rows(seeds), reduced=True)
    while True:
        elems = [LieElement(g, b) for b in basis]
        new = []
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                br = elems[i].bracket(elems[j])
                if br.coeffs and not linalg.in_span(br.coeffs, basis, piv):
                    new.append(br.coeffs)
        if not new:
            break
        basis, piv = linalg.echelon([*basis, *new], reduced=True)
    return [LieElement(g, b) for b in basis]


def span_equal(xs, ys) -> bool:
    a, _ = linalg.echelon(span_rows(xs))
    b, _ = linalg.echelon(span_rows(ys))
    return a == b


def restricted_algebra(g, basis, name="sub"):
    """Abstract algebra on the span of ``basis`` (must be bracket closed)."""
    # express brackets in the given basis by solving against it
    k = len(basis)
    table = {}
    for a in range(k):
        for b in range(a + 1, k):
            br = basis[a].bracket(basis[b])
            coords = express(br, basis)
            if coords is None:
                raise ValueError("basis does not span a subalgebra")
            if coords:
                table[(a, b)] = coords
    labels = [X(f"e{i}") for i in range(k)]
    return LieAlgebra(name, labels, table)


def express(x, basis):
    """Coordinates of ``x`` in the (independent) list ``basis`` or None."""
    # augment each basis row with a tag column to recover coordinates
    dim = x.algebra.dim
    rows = []
    for i, b in enumerate(basis):
        r = dict(b.coeffs)
        r[dim + i] = mpq(1)
        rows.append(r)
    ech, piv = linalg.echelon(rows)
    rem = linalg.reduce(x.coeffs, ech, piv)
    if any(k < dim for k in rem):
        return None
    return {k - dim: -v for k, v in rem.items()}


def derived_series_dims(g):
    dims = [g.dim]
    current = g.basis_elements()
    while True:
        brs = [x.bracket(y) for x, y in itertools.combinations(current, 2)]
        brs = [b for b in brs if b.coeffs]
        if not brs:
            dims.append(0)
            break
        ech, _ = linalg.echelon(span_rows(brs))
        nxt = [LieElement(g, r) for r in ech]
        if len(nxt) == len(current):
            break
        dims.append(len(nxt))
        current = nxt
    return dims


def lower_central_dims(g):
    dims = [g.dim]
    current = g.basis_elements()
    full = g.basis_elements()
    while True:
        brs = [x.bracket(y) for x in full for y in current]
        brs = [b for b in brs if b.coeffs]
        if not brs:
            dims.append(0)
            break
        ech, _ = linalg.echelon(span_rows(brs))
        if len(ech) == len(current):
            break
        current = [LieElement(g, r) for r in ech]
        dims.append(len(current))
    return dims


def center_dim(g) -> int:
    n = g.dim
    # x in center iff sum_a x_a [e_a, e_b] = 0 for all b
    rows = []
    for b in range(n):
        per = {}
        for a in range(n):
            for c, v in g.bracket_basis(a, b).items():
                per.setdefault(c, {})[a] = v
        rows.extend(per.values())
    return n - linalg.rank(rows)


def structural_invariants(g):
    return {
        "dim": g.dim,
        "derived_series": derived_series_dims(g),
        "lower_central_series": lower_central_dims(g),
        "center_dim": center_dim(g),
        "H2_dim": cohomology_H2_dim(g),
    }


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg complex with trivial coefficients


def _ce_differential(g, p):
    """Matrix (as sparse rows over p+1 forms) of d: Lambda^p g* -> Lambda^{p+1} g*.

    Convention: (d w)(x_0..x_p) = sum_{i<j} (-1)^{i+j} w([x_i, x_j], x_0..^i..^j..x_p).
    Returns rows indexed by (p+1)-subsets, columns by p-subsets.
    """
    n = g.dim
    src = list(itertools.combinations(range(n), p))
    src_idx = {s: k for k, s in enumerate(src)}
    tgt = list(itertools.combinations(range(n), p + 1))
    rows = []
    for t in tgt:
        row = {}
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                sign = -1 if (i + j) % 2 else 1
                rest = [t[m] for m in range(p + 1) if m != i and m != j]
                for c, v in g.bracket_basis(t[i], t[j]).items():
                    # w(e_c, rest...) -> sort, tracking the sign
                    seq = [c] + rest
                    if len(set(seq)) < len(seq):
                        continue
                    perm_sign = _sort_sign(seq)
                    key = tuple(sorted(seq))
                    col = src_idx[key]
                    row[col] = row.get(col, 0) + sign * perm_sign * v
        rows.append({k: v for k, v in row.items() if v})
    return rows, len(src), len(tgt)


def _sort_sign(seq):
    s = 1
    a = list(seq)
    for i in range(len(a)):
        for j in range(len(a) - 1 - i):
            if a[j] > a[j + 1]:
                a[j], a[j + 1] = a[j + 1], a[j]
                s = -s
    return s


def ce_differential(g, p):
    return _ce_differential(g, p)


def cohomology_dim(g, p) -> int:
    """dim H^p(g) with trivial coefficients, for p >= 1."""
    dp, ncols, _ = _ce_differential(g, p)
    rank_dp = linalg.rank(dp)
    if p == 0:
        return ncols - rank_dp
    dprev, _, _ = _ce_differential(g, p - 1)
    return (ncols - rank_dp) - linalg.rank(dprev)


def cohomology_H2_dim(g) -> int:
    if g.dim > 64:
        raise ValueError("algebra too large for the dense cohomology computation")
    return cohomology_dim(g, 2)
