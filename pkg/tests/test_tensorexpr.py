import pytest
import sympy
from gmpy2 import mpq

from twistchain.exactring import Jet
from twistchain.liealg import E, H, build_sl
from twistchain.sparse import SparseMatrix
from twistchain.tensorexpr import (Exp, Gen, NotNilpotent, Prod, build_adjoint_rep,
                                   counit_on_leg, defining_rep, eval_expr, exp_matrix, invert,
                                   log1p_matrix, sigma, swap_legs)


def test_exp_of_nilpotent_matches_sympy():
    m = [[0, 1, 2], [0, 0, 3], [0, 0, 0]]
    got = exp_matrix(SparseMatrix.from_dense(m)).to_dense()
    want = sympy.Matrix(m).exp()
    assert [[sympy.Rational(int(v.numerator), int(v.denominator)) for v in r] for r in got] \
        == want.tolist()


def test_exp_log_inverse():
    T = SparseMatrix.from_dense([[0, 2, 0], [0, 0, 1], [0, 0, 0]])
    L = log1p_matrix(T)
    assert exp_matrix(L) == SparseMatrix.identity(3) + T


def test_non_nilpotent_rejected():
    with pytest.raises(NotNilpotent):
        exp_matrix(SparseMatrix.from_dense([[1, 0], [0, 0]]))


def test_jet_exponential_first_order():
    xi = Jet.xi(2)
    T = SparseMatrix.from_dense([[xi, 0], [0, 0]])
    out = exp_matrix(T)
    assert out.get(0, 0) == Jet([1, 1, mpq(1, 2)], 2)


def test_adjoint_rep_is_homomorphism():
    g = build_sl(3)
    rep = build_adjoint_rep(g)
    assert rep.dim == 8


def test_swap_and_inverse_of_jordanian():
    g = build_sl(2)
    rep = defining_rep(g)
    F = Exp(Prod((Gen(g.element(H(1, 2)), 1), sigma(g.element(E(1, 2)), 2))))
    op = eval_expr(F, rep, 2)
    assert (op @ invert(op, F)).is_identity()
    assert swap_legs(swap_legs(op, 1, 2), 1, 2) == op


def test_counit_kills_leg():
    g = build_sl(2)
    rep = defining_rep(g)
    F = Exp(Prod((Gen(g.element(H(1, 2)), 1), sigma(g.element(E(1, 2)), 2))))
    assert eval_expr(counit_on_leg(F, 1), rep, 2).is_identity()
