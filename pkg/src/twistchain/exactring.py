"""Exact coefficient arithmetic.

Rationals are ``gmpy2.mpq`` values (always reduced, positive denominator).
:class:`Jet` is a polynomial in one formal parameter truncated at degree
``D``; it interoperates with rationals in both operand positions, so sparse
matrices can hold either kind of scalar.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

from gmpy2 import mpq

__all__ = [
    "Q", "Jet", "NotInvertible", "to_rational", "format_rational",
    "is_zero", "jet_invert", "coefficient", "lift",
]

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


class NotInvertible(ArithmeticError):
    pass


def to_rational(x) -> mpq:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to an exact rational."""
    if isinstance(x, type(ZERO)):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return mpq(x)
    if isinstance(x, (Fraction, _RationalABC)):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a string like '1/3'")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(x) -> str:
    x = to_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Jet:
    """Truncated polynomial ``c0 + c1*xi + ... + cD*xi**D``.

    Values are immutable.  Mixed operations with rationals promote the
    rational to a constant jet; two jets must share the truncation order.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int = 2):
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        cs = [to_rational(c) for c in coeffs][: order + 1]
        cs.extend([ZERO] * (order + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def const(cls, c, order: int = 2) -> "Jet":
        return cls([c], order)

    @classmethod
    def xi(cls, order: int = 2) -> "Jet":
        """The formal parameter itself."""
        return cls([0, 1], order)

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError("jets of different truncation order")
            return other
        try:
            return Jet([to_rational(other)], self.order)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet([a + b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet([a - b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            try:
                c = to_rational(other)
            except TypeError:
                return NotImplemented
            return Jet([a * c for a in self.coeffs], self.order)
        if other.order != self.order:
            raise ValueError("jets of different truncation order")
        D = self.order
        a, b = self.coeffs, other.coeffs
        out = [ZERO] * (D + 1)
        for i in range(D + 1):
            if a[i]:
                for j in range(D + 1 - i):
                    if b[j]:
                        out[i + j] += a[i] * b[j]
        return Jet(out, D)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * jet_invert(other)
        c = to_rational(other)
        if c == 0:
            raise ZeroDivisionError("jet division by zero")
        return Jet([a / c for a in self.coeffs], self.order)

    def __rtruediv__(self, other):
        return jet_invert(self) * other

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, Jet) else other
        if o is None:
            return NotImplemented
        return self.order == o.order and self.coeffs == o.coeffs

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.coeffs, self.order))

    def __bool__(self):
        return any(self.coeffs)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __repr__(self):
        return "Jet([" + ", ".join(format_rational(c) for c in self.coeffs) + f"], order={self.order})"

    def to_json(self):
        return [format_rational(c) for c in self.coeffs]


def jet_invert(a: Jet) -> Jet:
    """Multiplicative inverse up to the truncation order.

    Solves ``(a*b)_k = delta_k0`` term by term; requires a nonzero
    constant term.
    """
    if not isinstance(a, Jet):
        c = to_rational(a)
        if c == 0:
            raise NotInvertible("zero is not invertible")
        return ONE / c
    a0 = a.coeffs[0]
    if a0 == 0:
        raise NotInvertible("jet with vanishing constant term")
    D = a.order
    b = [ZERO] * (D + 1)
    b[0] = ONE / a0
    for k in range(1, D + 1):
        s = ZERO
        for i in range(1, k + 1):
            s += a.coeffs[i] * b[k - i]
        b[k] = -s / a0
    return Jet(b, D)


def is_zero(x) -> bool:
    return not x


def coefficient(x, k: int):
    """Degree-``k`` coefficient of a jet; rationals are constant jets."""
    if isinstance(x, Jet):
        return x.coeffs[k] if k <= x.order else ZERO
    return to_rational(x) if k == 0 else ZERO


def lift(x, order: int | None):
    """Promote ``x`` to a jet of the given order (no-op when order is None)."""
    if order is None or isinstance(x, Jet):
        return x
    return Jet.const(x, order)
