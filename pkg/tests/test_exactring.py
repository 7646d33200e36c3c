from fractions import Fraction

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, strategies as st

from twistchain.exactring import (Jet, NotInvertible, coefficient, format_rational, jet_invert,
                                  to_rational)

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)
jets = st.lists(rationals, min_size=1, max_size=4).map(lambda cs: Jet(cs, 3))


def test_to_rational_accepts_exact_inputs():
    assert to_rational("3/6") == mpq(1, 2)
    assert to_rational(Fraction(-2, 4)) == mpq(-1, 2)
    assert to_rational(7) == 7


@pytest.mark.parametrize("bad", [0.5, True, None, object()])
def test_to_rational_rejects_inexact(bad):
    with pytest.raises(TypeError):
        to_rational(bad)


def test_format_rational():
    assert format_rational(mpq(6, 3)) == "2"
    assert format_rational("-4/6") == "-2/3"


def test_jet_truncates_products():
    xi = Jet.xi(2)
    assert (xi * xi * xi) == 0
    assert (1 + xi) * (1 - xi) == Jet([1, 0, -1], 2)


def test_jet_inverse_and_errors():
    a = Jet([2, 3, 5], 2)
    assert a * jet_invert(a) == 1
    with pytest.raises(NotInvertible):
        jet_invert(Jet.xi(2))
    with pytest.raises(ZeroDivisionError):
        a / 0


def test_coefficient_of_rational_is_constant():
    assert coefficient(mpq(3), 0) == 3
    assert coefficient(mpq(3), 1) == 0
    assert coefficient(Jet([1, 4], 2), 1) == 4


@given(jets, jets, jets)
def test_jet_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(jets)
def test_jet_inverse_property(a):
    if a[0] != 0:
        assert a * jet_invert(a) == 1


@given(st.lists(rationals, min_size=4, max_size=4), st.lists(rationals, min_size=4, max_size=4))
def test_jet_product_matches_sympy_series(p, q):
    x = sympy.Symbol("x")
    P = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(p))
    Q = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(q))
    prod = sympy.Poly(sympy.expand(P * Q), x)
    got = Jet(p, 3) * Jet(q, 3)
    for k in range(4):
        want = prod.coeff_monomial(x**k)
        assert got[k] == mpq(int(want.p), int(want.q))
