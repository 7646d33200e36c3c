"""Tensor-leg expressions and their exact evaluation in representations.

An expression is a tree of :class:`Gen` leaves (a Lie element placed on one
tensor leg) combined with sums, ordered products, scalar multiples, ``Exp``
and ``Log1p``.  Evaluation in a representation ``rho`` of dimension ``d``
on ``k`` legs produces a ``d**k`` square sparse matrix; Exp and Log1p are
summed as finite series, which requires nilpotent arguments (modulo the
formal parameter when the scalars are jets).

The undeformed coproduct and counit act structurally on expressions:
``coproduct_on_leg`` doubles one leg, ``counit_on_leg`` deletes it.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from .exactring import Jet, format_rational, to_rational
from .liealg import LieElement
from .sparse import SparseMatrix


class NotNilpotent(ArithmeticError):
    pass


def _scalar(c):
    return c if isinstance(c, Jet) else to_rational(c)


def _fmt(c):
    return repr(c) if isinstance(c, Jet) else format_rational(c)


class Expr:
    """Base class; supports ``+``, ``-``, ``*`` (ordered product) and scalars."""

    def __add__(self, other):
        return Sum((self, _wrap(other)))

    def __radd__(self, other):
        return Sum((_wrap(other), self))

    def __sub__(self, other):
        return Sum((self, Scale(mpq(-1), _wrap(other))))

    def __neg__(self):
        return Scale(mpq(-1), self)

    def __mul__(self, other):
        if isinstance(other, Expr):
            return Prod((self, other))
        return Scale(_scalar(other), self)

    def __rmul__(self, other):
        return Scale(_scalar(other), self)

    def max_leg(self) -> int:
        return max((g.leg for g in leaves(self)), default=0)


def _wrap(x):
    return x if isinstance(x, Expr) else Const(_scalar(x))


@dataclass(frozen=True, eq=True)
class Gen(Expr):
    element: LieElement
    leg: int

    def __post_init__(self):
        if self.leg < 1:
            raise ValueError("legs are numbered from 1")

    def __str__(self):
        return f"({self.element})_{self.leg}"


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: object

    def __str__(self):
        return _fmt(self.value)


@dataclass(frozen=True, eq=True)
class Sum(Expr):
    children: tuple

    def __str__(self):
        return "(" + " + ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True, eq=True)
class Prod(Expr):
    children: tuple

    def __str__(self):
        return " ".join(str(c) for c in self.children)


@dataclass(frozen=True, eq=True)
class Scale(Expr):
    coeff: object
    child: Expr

    def __str__(self):
        return f"{_fmt(self.coeff)}*{self.child}"


@dataclass(frozen=True, eq=True)
class Exp(Expr):
    child: Expr

    def __str__(self):
        return f"exp[{self.child}]"


@dataclass(frozen=True, eq=True)
class Log1p(Expr):
    child: Expr

    def __str__(self):
        return f"ln(1+{self.child})"


ONE = Const(mpq(1))


def gen(x, leg) -> Gen:
    if not isinstance(x, LieElement):
        raise TypeError("gen expects a LieElement")
    return Gen(x, leg)


def prod(*factors) -> Expr:
    factors = [f for f in factors if not (isinstance(f, Const) and f.value == 1)]
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    return Prod(tuple(factors))


def sigma(x: LieElement, leg: int, coeff=1) -> Expr:
    """ln(1 + coeff * x) on one leg."""
    return Log1p(Scale(_scalar(coeff), Gen(x, leg)))


def leaves(expr):
    if isinstance(expr, Gen):
        yield expr
    elif isinstance(expr, Const):
        return
    elif isinstance(expr, (Sum, Prod)):
        for c in expr.children:
            yield from leaves(c)
    elif isinstance(expr, (Scale, Exp, Log1p)):
        yield from leaves(expr.child)
    else:
        raise TypeError(f"unknown node {expr!r}")


def map_legs(expr, f):
    """Rebuild ``expr`` with every Gen replaced by ``f(gen)`` (an Expr)."""
    if isinstance(expr, Gen):
        return f(expr)
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Sum):
        return Sum(tuple(map_legs(c, f) for c in expr.children))
    if isinstance(expr, Prod):
        return Prod(tuple(map_legs(c, f) for c in expr.children))
    if isinstance(expr, Scale):
        return Scale(expr.coeff, map_legs(expr.child, f))
    if isinstance(expr, Exp):
        return Exp(map_legs(expr.child, f))
    if isinstance(expr, Log1p):
        return Log1p(map_legs(expr.child, f))
    raise TypeError(f"unknown node {expr!r}")


def relabel(expr, mapping):
    """Move leg ``l`` to ``mapping[l]`` (legs absent from the map stay put)."""
    return map_legs(expr, lambda g: Gen(g.element, mapping.get(g.leg, g.leg)))


def shift_legs(expr, offset):
    return map_legs(expr, lambda g: Gen(g.element, g.leg + offset))


def coproduct_on_leg(expr, j: int):
    """Apply the primitive coproduct to leg ``j``; legs after ``j`` move up by one."""
    def f(g):
        if g.leg == j:
            return Sum((Gen(g.element, j), Gen(g.element, j + 1)))
        if g.leg > j:
            return Gen(g.element, g.leg + 1)
        return g
    return map_legs(expr, f)


def counit_on_leg(expr, j: int):
    """Apply the counit to leg ``j``; legs after ``j`` move down by one."""
    def f(g):
        if g.leg == j:
            return Const(mpq(0))
        if g.leg > j:
            return Gen(g.element, g.leg - 1)
        return g
    return map_legs(expr, f)


def inverse_expr(expr):
    """Structural inverse for products of exponentials, else None."""
    if isinstance(expr, Exp):
        return Exp(Scale(mpq(-1), expr.child))
    if isinstance(expr, Prod):
        parts = [inverse_expr(c) for c in reversed(expr.children)]
        if any(p is None for p in parts):
            return None
        return Prod(tuple(parts))
    if isinstance(expr, Const) and expr.value:
        v = expr.value
        return Const(1 / v if not isinstance(v, Jet) else v.__rtruediv__(1))
    return None


# ---------------------------------------------------------------------------
# representations


class Representation:
    """Matrix images of the basis of a Lie algebra.

    The homomorphism property is verified exactly on construction.
    """

    def __init__(self, algebra, images, name="rep", check=True):
        self.algebra = algebra
        self.images = list(images)
        self.dim = self.images[0].n if self.images else 0
        self.name = name
        self._cache = {}
        if check:
            self.check_homomorphism()

    def matrix(self, x: LieElement) -> SparseMatrix:
        key = tuple(sorted(x.coeffs.items()))
        m = self._cache.get(key)
        if m is None:
            m = SparseMatrix(self.dim)
            for k, c in x.coeffs.items():
                m = m + self.images[k].scale(c)
            self._cache[key] = m
        return m

    def check_homomorphism(self):
        g = self.algebra
        for a in range(g.dim):
            for b in range(a + 1, g.dim):
                lhs = self.images[a].commutator(self.images[b])
                rhs = self.matrix(LieElement(g, g.bracket_basis(a, b)))
                if lhs != rhs:
                    raise ValueError(
                        f"{self.name}: not a homomorphism on ({g.basis[a]}, {g.basis[b]})")

    def __repr__(self):
        return f"Representation({self.name}, {self.algebra.name}, dim={self.dim})"


def defining_rep(g) -> Representation:
    if g.realization is None:
        raise ValueError(f"{g.name} has no matrix realization")
    images = [SparseMatrix.from_dense(m) for m in g.realization]
    return Representation(g, images, name="defining")


def build_adjoint_rep(g) -> Representation:
    n = g.dim
    images = []
    for a in range(n):
        rows = {}
        for b in range(n):
            for c, v in g.bracket_basis(a, b).items():
                rows.setdefault(c, {})[b] = v
        images.append(SparseMatrix(n, rows))
    return Representation(g, images, name="adjoint")


def make_rep(g, kind="defining") -> Representation:
    if kind == "defining":
        return defining_rep(g)
    if kind == "adjoint":
        return build_adjoint_rep(g)
    raise ValueError(f"unknown representation {kind!r}")


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class TensorOp:
    matrix: SparseMatrix
    legs: int
    rep: Representation

    def __matmul__(self, other):
        self._check(other)
        return TensorOp(self.matrix @ other.matrix, self.legs, self.rep)

    def __add__(self, other):
        self._check(other)
        return TensorOp(self.matrix + other.matrix, self.legs, self.rep)

    def __sub__(self, other):
        self._check(other)
        return TensorOp(self.matrix - other.matrix, self.legs, self.rep)

    def _check(self, other):
        if self.legs != other.legs or self.rep is not other.rep:
            raise ValueError("operators live on different spaces")

    def is_identity(self):
        return self.matrix == SparseMatrix.identity(self.matrix.n)

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return self.legs == other.legs and self.matrix == other.matrix


def identity_op(rep, legs):
    return TensorOp(SparseMatrix.identity(rep.dim ** legs), legs, rep)


def embed(m: SparseMatrix, leg: int, legs: int, d: int) -> SparseMatrix:
    """I^(leg-1) (x) m (x) I^(legs-leg) without building the Kronecker chain."""
    left = d ** (leg - 1)
    right = d ** (legs - leg)
    out = {}
    for i, r in m.rows.items():
        for a in range(left):
            for b in range(right):
                row = (a * d + i) * right + b
                out[row] = {(a * d + j) * right + b: v for j, v in r.items()}
    return SparseMatrix(left * d * right, out)


def _series(T: SparseMatrix, coeff, max_terms):
    """sum_{m>=1} coeff(m) T^m, stopping at the first vanishing power."""
    n = T.n
    acc = SparseMatrix(n)
    power = T
    m = 1
    while not power.is_zero():
        if m > max_terms:
            raise NotNilpotent("series does not terminate: argument is not nilpotent")
        acc = acc + power.scale(coeff(m))
        power = power @ T
        m += 1
    return acc


def _jet_order(T: SparseMatrix):
    for r in T.rows.values():
        for v in r.values():
            if isinstance(v, Jet):
                return v.order
    return 0


def exp_matrix(T: SparseMatrix) -> SparseMatrix:
    bound = T.n * (_jet_order(T) + 1) + 1
    return SparseMatrix.identity(T.n) + _series(T, lambda m: mpq(1, factorial(m)), bound)


def log1p_matrix(T: SparseMatrix) -> SparseMatrix:
    bound = T.n * (_jet_order(T) + 1) + 1
    return _series(T, lambda m: mpq((-1) ** (m + 1), m), bound)


def eval_expr(expr, rep: Representation, legs: int | None = None) -> TensorOp:
    """Evaluate ``expr`` on ``legs`` tensor factors of ``rep``."""
    k = legs if legs is not None else max(expr.max_leg(), 1)
    if expr.max_leg() > k:
        raise ValueError(f"expression uses leg {expr.max_leg()} but only {k} legs requested")
    d = rep.dim
    size = d ** k
    memo = {}

    def ev(e):
        hit = memo.get(e)
        if hit is not None:
            return hit
        if isinstance(e, Gen):
            out = embed(rep.matrix(e.element), e.leg, k, d)
        elif isinstance(e, Const):
            out = SparseMatrix.identity(size, e.value)
        elif isinstance(e, Sum):
            out = SparseMatrix(size)
            for c in e.children:
                out = out + ev(c)
        elif isinstance(e, Prod):
            out = SparseMatrix.identity(size)
            for c in e.children:
                out = out @ ev(c)
        elif isinstance(e, Scale):
            out = ev(e.child).scale(e.coeff)
        elif isinstance(e, Exp):
            out = exp_matrix(ev(e.child))
        elif isinstance(e, Log1p):
            out = log1p_matrix(ev(e.child))
        else:
            raise TypeError(f"unknown node {e!r}")
        memo[e] = out
        return out

    return TensorOp(ev(expr), k, rep)


def leg_permutation(op: TensorOp, perm) -> TensorOp:
    """Reorder tensor factors: factor ``l`` of the input becomes factor ``perm[l]``."""
    d, k = op.rep.dim, op.legs

    def remap(idx):
        digits = []
        for _ in range(k):
            digits.append(idx % d)
            idx //= d
        digits.reverse()  # digits[l-1] is the index on leg l
        new = [0] * k
        for l in range(1, k + 1):
            new[perm[l] - 1] = digits[l - 1]
        out = 0
        for x in new:
            out = out * d + x
        return out

    n = op.matrix.n
    table = [remap(i) for i in range(n)]
    rows = {}
    for i, r in op.matrix.rows.items():
        rows[table[i]] = {table[j]: v for j, v in r.items()}
    return TensorOp(SparseMatrix(n, rows), k, op.rep)


def swap_legs(op: TensorOp, i: int, j: int) -> TensorOp:
    perm = {l: l for l in range(1, op.legs + 1)}
    perm[i], perm[j] = j, i
    return leg_permutation(op, perm)


def invert(op: TensorOp, expr=None) -> TensorOp:
    """Exact inverse; uses the structural inverse of ``expr`` when available."""
    if expr is not None:
        inv = inverse_expr(expr)
        if inv is not None:
            return eval_expr(inv, op.rep, op.legs)
    return TensorOp(op.matrix.inverse(), op.legs, op.rep)


def primitive_op(rep, x: LieElement, legs=2) -> TensorOp:
    """rho(x) on each leg, summed: the undeformed coproduct of x."""
    return eval_expr(Sum(tuple(Gen(x, l) for l in range(1, legs + 1))), rep, legs)


def dump_op(op: TensorOp):
    return {"legs": op.legs, "dim": op.matrix.n, "rep": op.rep.name,
            "entries": op.matrix.to_triplets()}
