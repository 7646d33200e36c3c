"""Hopf-level checks: Drinfeld equations, counit, R-matrices, Yang-Baxter,
twisted coproducts and primitivity.

All checks evaluate exactly in a finite-dimensional representation and
report the support of the difference operator.
"""
from __future__ import annotations

from gmpy2 import mpq

from .liealg import E, H, LieElement, build_L, build_sl, cartan_HP, cartan_Hperp
from .report import VerificationReport, timed
from .tensorexpr import (Const, Exp, Expr, Gen, Prod, Scale, Sum, TensorOp, coproduct_on_leg,
                         counit_on_leg, defining_rep, eval_expr, identity_op, inverse_expr, invert,
                         leg_permutation, primitive_op, relabel, shift_legs, sigma, swap_legs)


def _elapsed_report(name, support, rep, params, seed, box, detail=None):
    return VerificationReport(name, support == 0, support, dict(params or {}), rep.name, seed,
                              box.get("elapsed", 0.0), detail or {})


# ---------------------------------------------------------------------------
# twist equations


def drinfeld_sides(F: Expr, rep):
    """(F_12 (Delta x id)(F), F_23 (id x Delta)(F)) as 3-leg operators."""
    lhs = eval_expr(Prod((F, coproduct_on_leg(F, 1))), rep, 3)
    rhs = eval_expr(Prod((shift_legs(F, 1), coproduct_on_leg(F, 2))), rep, 3)
    return lhs, rhs


def check_drinfeld(F: Expr, rep, name="drinfeld", params=None, seed=None):
    with timed() as box:
        lhs, rhs = drinfeld_sides(F, rep)
        support = (lhs - rhs).matrix.nnz()
    return _elapsed_report(name, support, rep, params, seed, box)


def check_counit(F: Expr, rep, name="counit", params=None, seed=None):
    with timed() as box:
        support = 0
        for leg in (1, 2):
            op = eval_expr(counit_on_leg(F, leg), rep, 1)
            support += (op - identity_op(rep, 1)).matrix.nnz()
    return _elapsed_report(name, support, rep, params, seed, box)


# ---------------------------------------------------------------------------
# R-matrices


def r_matrix_expr(F: Expr) -> Expr | None:
    """F_21 F^{-1} as an expression, when F has a structural inverse."""
    inv = inverse_expr(F)
    if inv is None:
        return None
    return Prod((relabel(F, {1: 2, 2: 1}), inv))


def r_matrix(F: Expr, rep) -> TensorOp:
    op = eval_expr(F, rep, 2)
    return swap_legs(op, 1, 2) @ invert(op, F)


def _on_legs(op: TensorOp, legs, total):
    """Place a 2-leg operator on the given pair of legs out of ``total``."""
    ident = identity_op(op.rep, total - 2)
    big = TensorOp(op.matrix.kron(ident.matrix), total, op.rep)
    perm = {}
    rest = [l for l in range(1, total + 1) if l not in legs]
    perm[1], perm[2] = legs
    for src, dst in zip(range(3, total + 1), rest):
        perm[src] = dst
    return leg_permutation(big, perm)


def check_qybe(R: TensorOp, name="qybe", params=None, seed=None):
    with timed() as box:
        R12 = _on_legs(R, (1, 2), 3)
        R13 = _on_legs(R, (1, 3), 3)
        R23 = _on_legs(R, (2, 3), 3)
        support = (R12 @ R13 @ R23 - R23 @ R13 @ R12).matrix.nnz()
    return _elapsed_report(name, support, R.rep, params, seed, box)


def check_hexagon(F: Expr, rep, name="hexagon", params=None, seed=None):
    """(Delta_F x id)(R) = R_13 R_23 on three legs."""
    with timed() as box:
        Rx = r_matrix_expr(F)
        F12 = eval_expr(F, rep, 3)
        lhs = F12 @ eval_expr(coproduct_on_leg(Rx, 1), rep, 3) @ invert(F12, F)
        R = r_matrix(F, rep)
        support = (lhs - _on_legs(R, (1, 3), 3) @ _on_legs(R, (2, 3), 3)).matrix.nnz()
    return _elapsed_report(name, support, rep, params, seed, box)


# ---------------------------------------------------------------------------
# coproducts


class TwistedCoproduct:
    """Caches F and F^{-1} on two legs for repeated coproduct evaluation."""

    def __init__(self, F: Expr, rep):
        self.F = F
        self.rep = rep
        self.op = eval_expr(F, rep, 2)
        self.inv = invert(self.op, F)

    def __call__(self, X: LieElement) -> TensorOp:
        return self.op @ primitive_op(self.rep, X, 2) @ self.inv


def twisted_coproduct(F: Expr, X: LieElement, rep) -> TensorOp:
    return TwistedCoproduct(F, rep)(X)


def check_coproduct_table(F: Expr, table, rep, name="coproducts", params=None, seed=None):
    """``table`` is a sequence of (label, X, rhs expression)."""
    with timed() as box:
        dF = TwistedCoproduct(F, rep)
        rows, support = {}, 0
        for label, X, rhs in table:
            s = (dF(X) - eval_expr(rhs, rep, 2)).matrix.nnz()
            rows[label] = s
            support += s
    return _elapsed_report(name, support, rep, params, seed, box, {"rows": rows})


def check_primitive(F: Expr, X: LieElement, rep, name="primitive", params=None, seed=None,
                    coproduct=None):
    with timed() as box:
        dF = coproduct or TwistedCoproduct(F, rep)
        support = (dF(X) - primitive_op(rep, X, 2)).matrix.nnz()
    return _elapsed_report(name, support, rep, params, seed, box)


def check_coassociativity(F: Expr, X: LieElement, rep, name="coassociativity", params=None,
                          seed=None):
    """(Delta_F x id) Delta_F(X) = (id x Delta_F) Delta_F(X) on three legs."""
    with timed() as box:
        prim = Sum(tuple(Gen(X, l) for l in (1, 2, 3)))
        # (Delta_F x id)Delta_F(X) = F_12 (Delta x id)(F) Delta^2(X) ((Delta x id)F)^-1 F_12^-1
        left = Prod((F, coproduct_on_leg(F, 1)))
        right = Prod((shift_legs(F, 1), coproduct_on_leg(F, 2)))
        L = eval_expr(left, rep, 3)
        Rr = eval_expr(right, rep, 3)
        P = eval_expr(prim, rep, 3)
        a = L @ P @ invert(L, left)
        b = Rr @ P @ invert(Rr, right)
        support = (a - b).matrix.nnz()
    return _elapsed_report(name, support, rep, params, seed, box)


def check_coassociativity_all(F: Expr, gens, rep, name="coassociativity", params=None, seed=None):
    """Coassociativity of Delta_F on every (label, X) in ``gens``, sharing the 3-leg sides."""
    with timed() as box:
        left = Prod((F, coproduct_on_leg(F, 1)))
        right = Prod((shift_legs(F, 1), coproduct_on_leg(F, 2)))
        L, Rr = eval_expr(left, rep, 3), eval_expr(right, rep, 3)
        Li, Ri = invert(L, left), invert(Rr, right)
        rows, support = {}, 0
        for label, X in gens:
            P = eval_expr(Sum(tuple(Gen(X, l) for l in (1, 2, 3))), rep, 3)
            s = (L @ P @ Li - Rr @ P @ Ri).matrix.nnz()
            rows[label] = s
            support += s
    return _elapsed_report(name, support, rep, params, seed, box, {"rows": rows})


def chevalley_generators(N):
    g = build_sl(N)
    out = []
    for i in range(1, N):
        out.append((f"E{i},{i + 1}", g.element(E(i, i + 1))))
        out.append((f"E{i + 1},{i}", g.element(E(i + 1, i))))
        out.append((f"H{i},{i + 1}", g.element(H(i, i + 1))))
    return out


# ---------------------------------------------------------------------------
# sl(N) helpers for coproduct tables


def sl_generators(N):
    """Basis of sl(N): root vectors E_ij and the Cartan basis H_{i,i+1}."""
    g = build_sl(N)
    return [(str(lab), g.element(lab)) for lab in g.basis]


def embedded_sl_generators(N, k):
    """Generators of sl(N-2k) sitting on indices k+1..N-k."""
    g = build_sl(N)
    lo, hi = k + 1, N - k
    out = []
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            if i != j:
                out.append((f"E{i},{j}", g.element(E(i, j))))
    for i in range(lo, hi):
        out.append((f"H{i},{i + 1}", g.element(H(i, i + 1))))
    return out


def check_matreshka(N, k, rep=None, psi=None, name=None):
    """After the first k links every generator of the embedded sl(N-2k) is primitive."""
    from .twistlib import peripheric_chain
    rep = rep or defining_rep(build_sl(N))
    psi = psi if psi is not None else [1] * k
    F = peripheric_chain(N, psi)
    with timed() as box:
        dF = TwistedCoproduct(F, rep)
        rows, support = {}, 0
        for label, X in embedded_sl_generators(N, k):
            s = (dF(X) - primitive_op(rep, X, 2)).matrix.nnz()
            rows[label] = s
            support += s
    return _elapsed_report(name or f"matreshka sl({N}) k={k}", support, rep,
                           {"N": N, "k": k, "psi": psi}, None, box, {"rows": rows})


def operators_equal(a: Expr, b: Expr, rep, legs=2, name="equal", params=None, seed=None):
    with timed() as box:
        support = (eval_expr(a, rep, legs) - eval_expr(b, rep, legs)).matrix.nnz()
    return _elapsed_report(name, support, rep, params, seed, box)



# ---------------------------------------------------------------------------
# printed coproduct tables


def _g(x, leg):
    return Gen(x, leg)


def _es(sig, c=1):
    """exp(c * sig) for a one-leg sigma expression."""
    return Exp(Scale(mpq(c), sig))


def _t(*factors):
    return Prod(tuple(factors))


def _sum(*terms):
    return Sum(tuple(terms))


def _neg(x):
    return Scale(mpq(-1), x)


def pet_table():
    """Coproducts of L(1, 0) twisted by the PET (parameter 1)."""
    L = build_L(1, 0)
    Hx, A, B, Ex = (L.element(s) for s in "HABE")
    s1, s2 = sigma(Ex, 1), sigma(Ex, 2)
    return L, [
        ("H", Hx, _sum(_t(_g(Hx, 1), _es(s2, -1)), _g(Hx, 2),
                       _neg(_t(_g(A, 1), _g(B, 2), _es(s2, -1))))),
        ("A", A, _sum(_g(A, 1), _g(A, 2))),
        ("B", B, _sum(_g(B, 1), _t(_es(s1), _g(B, 2)))),
        ("E", Ex, _sum(_t(_g(Ex, 1), _es(s2)), _g(Ex, 2))),
    ]


def _sl4():
    g = build_sl(4)
    e = {(i, j): g.element(E(i, j)) for i in range(1, 5) for j in range(1, 5) if i != j}
    HP14, HP23, Hp = cartan_HP(0, 4), cartan_HP(1, 4), cartan_Hperp(1, 4)
    sig = {key: (lambda leg, key=key: sigma(e[key], leg)) for key in [(1, 4), (2, 3), (1, 3)]}
    return g, e, HP14, HP23, Hp, sig


# Rows of the printed sl(4) tables that disagree with the twist they describe.
# Each entry names the row and the single change that makes it exact.
MISPRINTS = {
    "delta_pb": {
        "E12": "exponent of the first term is -sigma_23, not -sigma_14",
        "E34": "the H^P_23 term carries exp(sigma_14) on the first leg",
    },
    "delta_jb": {
        "E12": "exponent of the first term is sigma_13 - sigma_23, not sigma_13 - sigma_14",
        "E34": "the H^P_23 term carries exp(sigma_14) on the first leg",
        "HP14": "the H1perp (x) (exp(-sigma_13) - 1) term enters with a plus sign",
    },
}


def delta_pb_table(printed=False):
    """Coproducts of B+(sl(4)) after the two-link peripheric chain.

    With ``printed`` the rows listed in MISPRINTS are returned as printed.
    """
    g, e, HP14, HP23, Hp, sig = _sl4()
    s14, s23 = sig[(1, 4)], sig[(2, 3)]
    e12_exp = s14 if printed else s23
    e34_left = _g(HP23, 1) if printed else _t(_g(HP23, 1), _es(s14(1)))
    rows = [
        ("E12", e[1, 2], _sum(_t(_g(e[1, 2], 1), _es(e12_exp(2), -1)), _g(e[1, 2], 2),
                              _neg(_t(_g(HP23, 1), _g(e[1, 3], 2), _es(s23(2), -1))))),
        ("E13", e[1, 3], _sum(_g(e[1, 3], 1), _g(e[1, 3], 2))),
        ("E14", e[1, 4], _sum(_t(_g(e[1, 4], 1), _es(s14(2))), _g(e[1, 4], 2))),
        ("E23", e[2, 3], _sum(_t(_g(e[2, 3], 1), _es(s23(2))), _g(e[2, 3], 2))),
        ("E24", e[2, 4], _sum(_t(_g(e[2, 4], 1), _es(s23(2))), _t(_es(s14(1)), _g(e[2, 4], 2)))),
        ("E34", e[3, 4], _sum(_g(e[3, 4], 1), _t(_es(s14(1)), _g(e[3, 4], 2)),
                              _t(e34_left, _g(e[2, 4], 2), _es(s23(2), -1)))),
        ("HP14", HP14, _sum(_t(_g(HP14, 1), _es(s14(2), -1)), _g(HP14, 2),
                            _neg(_t(_g(e[1, 3], 1), _g(e[3, 4], 2), _es(s14(2), -1))),
                            _neg(_t(_sum(_g(e[1, 2], 1), _t(_g(HP23, 1), _g(e[1, 3], 1))),
                                    _g(e[2, 4], 2), _es(s14(2), -1), _es(s23(2), -1))))),
        ("HP23", HP23, _sum(_t(_g(HP23, 1), _es(s23(2), -1)), _g(HP23, 2))),
        ("Hperp1", Hp, _sum(_g(Hp, 1), _g(Hp, 2))),
    ]
    return g, rows


def delta_jb_table(printed=False):
    """Coproducts of B+(sl(4)) after exp(H1perp (x) sigma_13) times the chain."""
    g, e, HP14, HP23, Hp, sig = _sl4()
    s14, s23, s13 = sig[(1, 4)], sig[(2, 3)], sig[(1, 3)]
    one = Const(mpq(1))
    e12_exp = s14 if printed else s23
    e34_left = _g(HP23, 1) if printed else _t(_g(HP23, 1), _es(s14(1)))
    hperp_term = _t(_g(Hp, 1), _sum(_es(s13(2), -1), _neg(one)))
    rows = [
        ("E12", e[1, 2], _sum(_t(_g(e[1, 2], 1), _es(s13(2)), _es(e12_exp(2), -1)), _g(e[1, 2], 2),
                              _neg(_t(_g(HP23, 1), _g(e[1, 3], 2), _es(s23(2), -1))))),
        ("E13", e[1, 3], _sum(_t(_g(e[1, 3], 1), _es(s13(2))), _g(e[1, 3], 2))),
        ("E14", e[1, 4], _sum(_t(_g(e[1, 4], 1), _es(s14(2))), _g(e[1, 4], 2))),
        ("E23", e[2, 3], _sum(_t(_g(e[2, 3], 1), _es(s23(2))), _g(e[2, 3], 2))),
        ("E24", e[2, 4], _sum(_t(_g(e[2, 4], 1), _es(s23(2)), _es(s13(2), -1)),
                              _t(_es(s14(1)), _g(e[2, 4], 2)))),
        ("E34", e[3, 4], _sum(_t(_g(e[3, 4], 1), _es(s13(2), -1)), _t(_es(s14(1)), _g(e[3, 4], 2)),
                              _t(_g(Hp, 1), _es(s14(1)), _sum(_es(s14(2)), _neg(one)),
                                 _es(s13(2), -1)),
                              _t(e34_left, _g(e[2, 4], 2), _es(s23(2), -1)))),
        ("HP14", HP14, _sum(_t(_g(HP14, 1), _es(s14(2), -1)), _g(HP14, 2),
                            _neg(hperp_term) if printed else hperp_term,
                            _neg(_t(_sum(_es(s13(1)), _neg(one)), _g(e[3, 4], 2),
                                    _es(s14(2), -1), _es(s13(2)))),
                            _neg(_t(_g(Hp, 1), _sum(_es(s13(1)), _neg(one)),
                                    _sum(one, _neg(_es(s14(2), -1))))),
                            _neg(_t(_sum(_g(e[1, 2], 1), _t(_g(HP23, 1), _g(e[1, 3], 1))),
                                    _g(e[2, 4], 2), _es(s14(2), -1), _es(s23(2), -1),
                                    _es(s13(2)))))),
        ("HP23", HP23, _sum(_t(_g(HP23, 1), _es(s23(2), -1)), _g(HP23, 2))),
        ("Hperp1", Hp, _sum(_t(_g(Hp, 1), _es(s13(2), -1)), _g(Hp, 2))),
    ]
    return g, rows
