"""Classical side: r-matrix bivectors, semiclassical limits of twists,
the classical Yang-Baxter equation, carriers, the injection family phi,
omega-forms and the dual bracket.

Wedges follow ``x ^ y = x (x) y - y (x) x``.  A :class:`Bivector` is
stored as its antisymmetric coefficient matrix over the basis of the
ambient algebra, which makes it canonical.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from . import linalg
from .exactring import Jet, coefficient, format_rational, to_rational
from .liealg import (E, H, IndexOutOfRange, Label, LieElement, abstract_algebra, build_L, build_sl,
                     cartan_HP, cartan_Hperp, diag_element, express, n_half, restricted_algebra,
                     span_equal, subalgebra_closure, z_max)
from .report import VerificationReport, timed
from .sparse import SparseMatrix
from .tensorexpr import TensorOp, defining_rep, eval_expr, invert, swap_legs
from .twistlib import (BadParameters, ChainSpec, jordanian, nu_rho_to_psi_zeta, random_rationals,
                       sl3_generators)


class UnknownFormula(KeyError):
    pass


class BasisMismatch(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


def _q(x):
    try:
        return to_rational(x)
    except (TypeError, ValueError) as exc:
        raise BadParameters(str(exc)) from None


# ---------------------------------------------------------------------------
# bivectors


class Bivector:
    """sum_{a<b} c_ab e_a ^ e_b over the basis of ``algebra``."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs=None):
        self.algebra = algebra
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def from_terms(cls, algebra, terms):
        """``terms``: iterable of (x, y, c) meaning c * x ^ y."""
        acc = {}
        for x, y, c in terms:
            x, y, c = algebra.element(x), algebra.element(y), _q(c)
            for a, xa in x.coeffs.items():
                for b, yb in y.coeffs.items():
                    if a == b:
                        continue
                    key, s = ((a, b), 1) if a < b else ((b, a), -1)
                    acc[key] = acc.get(key, 0) + s * c * xa * yb
        return cls(algebra, acc)

    def __add__(self, other):
        if other.algebra is not self.algebra:
            raise ValueError("bivectors over different algebras")
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return Bivector(self.algebra, c)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = _q(c)
        return Bivector(self.algebra, {k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, Bivector):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def is_zero(self):
        return not self.coeffs

    def matrix_entries(self):
        """Full antisymmetric coefficient matrix as ``{(a, b): c}``."""
        out = {}
        for (a, b), c in self.coeffs.items():
            out[(a, b)] = c
            out[(b, a)] = -c
        return out

    def terms(self):
        g = self.algebra
        return [(g.basis[a], g.basis[b], c) for (a, b), c in sorted(self.coeffs.items())]

    def legs(self):
        """Basis of the image of the coefficient matrix (the span of the legs)."""
        rows = {}
        for (a, b), c in self.matrix_entries().items():
            rows.setdefault(a, {})[b] = c
        ech, _ = linalg.echelon(list(rows.values()))
        return [LieElement(self.algebra, r) for r in ech]

    def rank(self):
        return len(self.legs())

    def to_json(self):
        return [[str(x), str(y), format_rational(c)] for x, y, c in self.terms()]

    def __repr__(self):
        if not self.coeffs:
            return "Bivector(0)"
        return " + ".join(f"{format_rational(c)}*{x}^{y}" for x, y, c in self.terms())


def evaluate_bivector(r: Bivector, rep) -> TensorOp:
    """rho (x) rho applied to r, as a two-leg operator."""
    d = rep.dim
    g = r.algebra
    mats = {}

    def m(a):
        if a not in mats:
            mats[a] = rep.matrix(LieElement(g, {a: 1}))
        return mats[a]

    acc = SparseMatrix.zero(d * d)
    for (a, b), c in r.coeffs.items():
        acc = acc + (m(a).kron(m(b)) - m(b).kron(m(a))).scale(c)
    return TensorOp(acc, 2, rep)


# ---------------------------------------------------------------------------
# printed r-matrix families


def _params(params, *names, **defaults):
    params = dict(params or {})
    out = []
    for name in names:
        if name in params:
            out.append(params.pop(name))
        elif name in defaults:
            out.append(defaults[name])
        else:
            raise BadParameters(f"missing parameter {name!r}")
    if params:
        raise BadParameters(f"unexpected parameters {sorted(params)}")
    return out


def _qlist(v, length, name):
    v = [_q(x) for x in v]
    if len(v) != length:
        raise BadParameters(f"{name} needs {length} values, got {len(v)}")
    return v


def _chain_terms(N, coeffs, cartan):
    """Link terms c_k (H_k ^ E_{k+1,N-k} + sum_s E_{k+1,s} ^ E_{s,N-k})."""
    g = build_sl(N)
    terms = []
    for k, c in enumerate(coeffs):
        a, b = k + 1, N - k
        terms.append((cartan(k), g.element(E(a, b)), c))
        for s in range(k + 2, N - k):
            terms.append((g.element(E(a, s)), g.element(E(s, b)), c))
    return terms


def r_JB(N, psi, zeta):
    """General enlarged-chain r-matrix; the nu/rho form follows via nu_rho_to_psi_zeta."""
    z, n = z_max(N), n_half(N)
    psi, zeta = _qlist(psi, z, "psi"), _qlist(zeta, n - 1, "zeta")
    g = build_sl(N)
    zeta0 = [mpq(1)] + zeta
    terms = _chain_terms(N, [psi[k] * zeta0[k] for k in range(z)], lambda k: cartan_HP(k, N))
    for i in range(1, n):
        terms.append((cartan_Hperp(i, N), g.element(E(i, N - i)), psi[i - 1] * zeta[i - 1]))
    return Bivector.from_terms(g, terms)


def r_JB_rewritten(N, psi, zeta):
    """The same r-matrix with each link's last extension term merged with H_perp."""
    z, n = z_max(N), n_half(N)
    psi, zeta = _qlist(psi, z, "psi"), _qlist(zeta, n - 1, "zeta")
    g = build_sl(N)
    zeta0 = [mpq(1)] + zeta
    terms = []
    for k in range(z):
        c = psi[k] * zeta0[k]
        a, b = k + 1, N - k
        if k + 2 <= N - k - 1:
            right = g.element(E(N - k - 1, N - k)) - cartan_Hperp(k + 1, N) * (zeta[k] / zeta0[k])
            terms.append((g.element(E(a, N - k - 1)), right, c))
        terms.append((cartan_HP(k, N), g.element(E(a, b)), c))
        for s in range(k + 2, N - k - 1):
            terms.append((g.element(E(a, s)), g.element(E(s, b)), c))
    return Bivector.from_terms(g, terms)


def r_B_canonical(N, psi):
    g = build_sl(N)
    psi = _qlist(psi, z_max(N), "psi")
    return Bivector.from_terms(g, _chain_terms(N, psi, lambda k: g.element(H(k + 1, N - k))))


def primitive_J(N):
    """J_m: E_{k+1,N-k} for the links, then E^P_l = E_{l,N-l}."""
    g = build_sl(N)
    return ([g.element(E(k + 1, N - k)) for k in range(z_max(N))]
            + [g.element(E(l, N - l)) for l in range(1, n_half(N))])


def r_RB(N, psi, beta):
    g = build_sl(N)
    psi = _qlist(psi, z_max(N), "psi")
    J = primitive_J(N)
    if len(beta) != len(J) or any(len(row) != len(J) for row in beta):
        raise BadParameters(f"beta must be a {len(J)}x{len(J)} matrix")
    terms = _chain_terms(N, psi, lambda k: cartan_HP(k, N))
    for m, row in enumerate(beta):
        for n_, b in enumerate(row):
            terms.append((J[m], J[n_], b))
    return Bivector.from_terms(g, terms)


def r_JB_sl4(psi, zeta):
    psi1, psi2 = _qlist(psi, 2, "psi")
    (vs,) = _qlist(zeta, 1, "zeta")
    g = build_sl(4)
    e = lambda i, j: g.element(E(i, j))
    return Bivector.from_terms(g, [
        (e(1, 3), e(3, 4) - cartan_Hperp(1, 4) * vs, psi1),
        (cartan_HP(1, 4), e(2, 3), psi2 * vs),
        (cartan_HP(0, 4), e(1, 4), psi1),
        (e(1, 2), e(2, 4), psi1),
    ])


def r_JB_sl7(psi, zeta):
    p1, p2, p3 = _qlist(psi, 3, "psi")
    s1, s2, s3 = _qlist(zeta, 3, "zeta")
    g = build_sl(7)
    e = lambda i, j: g.element(E(i, j))
    hp = lambda i: cartan_HP(i - 1, 7)
    hq = lambda i: cartan_Hperp(i, 7)
    t = [(hp(1), e(1, 7), p1)]
    t += [(e(1, k), e(k, 7), p1) for k in range(2, 6)]
    t += [(e(1, 6), e(6, 7) - hq(1) * s1, p1)]
    t += [(hp(2), e(2, 6), p2 * s1)]
    t += [(e(2, k), e(k, 6), p2 * s1) for k in (3, 4)]
    t += [(e(2, 5), e(5, 6) - hq(2) * (s2 / s1), p2 * s1)]
    t += [(hp(3), e(3, 5), p3 * s2), (e(3, 4), e(4, 5) - hq(3) * (s3 / s2), p3 * s2)]
    return Bivector.from_terms(g, t)


def r_JB_sl7_phi(psi, zeta, literal=False):
    """The sl(7) r-matrix written through the phi-images A, B, C.

    The printed grouping uses A_57 where C_57 is needed (two places);
    ``literal=True`` keeps A_57 and then differs from ``r_JB_sl7``.
    """
    p1, p2, p3 = _qlist(psi, 3, "psi")
    s1, s2, s3 = _qlist(zeta, 3, "zeta")
    ph = PhiMap(7, [s1, s2, s3])
    A, B = ph.A, ph.B
    C57 = A(5, 7) if literal else ph.C(5, 7)
    g = ph.g
    e = lambda i, j: g.element(E(i, j))
    hp = lambda i: cartan_HP(i - 1, 7)
    m57 = C57 + A(4, 7) * (s2 / s3)
    t = [
        (hp(1), A(1, 7), p1), (e(1, 2), A(2, 7), p1), (e(1, 3), A(3, 7), p1),
        (A(1, 4) - A(1, 5) * (s2 / s3), A(4, 7), p1),
        (A(1, 5) - A(1, 6) * (s1 / s2), m57, p1),
        (A(1, 6) - A(1, 7) / s1, B(1) * s1, p1),
        (hp(2), A(2, 6) - A(2, 7) / s1, s1 * p2),
        (e(2, 3), A(3, 6) - A(3, 7) / s1, s1 * p2),
        (A(2, 4) - A(2, 5) * (s2 / s3), A(4, 6) - A(4, 7) / s1, s1 * p2),
        (A(2, 5) - A(2, 6) * (s1 / s2), B(2) * (s2 / s1) - m57 / s1, s1 * p2),
        (hp(3), A(3, 5) - A(3, 6) * (s1 / s2), s2 * p3),
        (A(3, 4) - A(3, 5) * (s2 / s3), B(3) * (s3 / s2) - A(4, 6) * (s1 / s2), s2 * p3),
    ]
    return Bivector.from_terms(g, t)


def r_JE_sl3(xi):
    s = sl3_generators()
    return Bivector.from_terms(build_sl(3), [
        (s["HP"], s["E"], 1), (s["A"], s["B"], 1), (s["Hperp"], s["A"], _q(xi))])


def r_RE_sl3(zeta):
    s = sl3_generators()
    return Bivector.from_terms(build_sl(3), [
        (s["HP"], s["E"], 1), (s["A"], s["B"], 1), (s["Hperp"], s["E"], _q(zeta))])


def r_JE_P_sl3(zeta):
    s = sl3_generators()
    return Bivector.from_terms(build_sl(3), [
        (s["HP"], s["E"], 1), (s["A"], s["B"] - s["Hperp"] * _q(zeta), 1)])


def r_JJ_sl3(eta, psi=1):
    s = sl3_generators()
    return Bivector.from_terms(build_sl(3), [
        (s["Hperp12"], s["E"], _q(psi)), (s["Hperp"], s["A"], _q(eta))])


FORMULAS = {
    "r_JE_sl3": (False, lambda N, p: r_JE_sl3(*_params(p, "xi"))),
    "r_RE_sl3": (False, lambda N, p: r_RE_sl3(*_params(p, "zeta"))),
    "r_RB": (True, lambda N, p: r_RB(N, *_params(p, "psi", "beta"))),
    "r_JB": (True, lambda N, p: r_JB(N, *_params(p, "psi", "zeta"))),
    "r_JB_sl4": (False, lambda N, p: r_JB_sl4(*_params(p, "psi", "zeta"))),
    "r_JB_sl7": (False, lambda N, p: r_JB_sl7(*_params(p, "psi", "zeta"))),
    "r_JB_sl7_phi": (False, lambda N, p: r_JB_sl7_phi(*_params(p, "psi", "zeta"))),
    "r_JE_P_sl3": (False, lambda N, p: r_JE_P_sl3(*_params(p, "zeta"))),
    "r_JJ_sl3": (False, lambda N, p: r_JJ_sl3(*_params(p, "eta", psi=1))),
    "r_B_canonical": (True, lambda N, p: r_B_canonical(N, *_params(p, "psi"))),
}

FIXED_N = {"r_JE_sl3": 3, "r_RE_sl3": 3, "r_JE_P_sl3": 3, "r_JJ_sl3": 3,
           "r_JB_sl4": 4, "r_JB_sl7": 7, "r_JB_sl7_phi": 7}


def r_formula(name, N=None, params=None) -> Bivector:
    if name not in FORMULAS:
        raise UnknownFormula(name)
    needs_n, build = FORMULAS[name]
    if needs_n:
        if not isinstance(N, int) or N < 3:
            raise BadParameters(f"{name} needs an integer N >= 3")
    elif N is not None and N != FIXED_N[name]:
        raise BadParameters(f"{name} lives in sl({FIXED_N[name]})")
    return build(N, params)


def random_formula_params(name, N, rng):
    """A seeded generic parameter point for a formula family."""
    N = FIXED_N.get(name, N)
    z, n = z_max(N), n_half(N)
    if name in ("r_JE_sl3",):
        return {"xi": random_rationals(rng, 1)[0]}
    if name in ("r_RE_sl3", "r_JE_P_sl3"):
        return {"zeta": random_rationals(rng, 1)[0]}
    if name == "r_JJ_sl3":
        return {"eta": random_rationals(rng, 1)[0]}
    if name == "r_B_canonical":
        return {"psi": random_rationals(rng, z)}
    if name == "r_RB":
        m = z + n - 1
        return {"psi": random_rationals(rng, z),
                "beta": [random_rationals(rng, m) for _ in range(m)]}
    return {"psi": random_rationals(rng, z), "zeta": random_rationals(rng, n - 1)}


# ---------------------------------------------------------------------------
# semiclassical limit


def semiclassical(spec: ChainSpec, rep, order=2) -> TensorOp:
    """Degree-one coefficient of R(xi) = F_21 F^{-1} with every parameter scaled by xi."""
    if order < 2:
        raise ValueError("jet order must be at least 2")
    F = spec.scaled(Jet.xi(order)).build()
    return _first_order(F, rep)


def _first_order(F, rep):
    op = eval_expr(F, rep, 2)
    R = swap_legs(op, 1, 2) @ invert(op, F)
    return TensorOp(R.matrix.map_entries(lambda v: coefficient(v, 1)), 2, rep)


@lru_cache(maxsize=None)
def semiclassical_sign() -> int:
    """Measured sign s with  xi^1 coefficient of R = s * (r evaluated).

    Fixed on the sl(2) Jordanian twist exp(H (x) ln(1 + xi E)), whose
    r-matrix is H ^ E.
    """
    g = build_sl(2)
    Hx, Ex = g.element(H(1, 2)), g.element(E(1, 2))
    rep = defining_rep(g)
    coeff = _first_order(jordanian(Hx, Ex, Jet.xi(2)), rep)
    r = evaluate_bivector(Bivector.from_terms(g, [(Hx, Ex, 1)]), rep)
    for s in (1, -1):
        if (coeff.matrix - r.matrix.scale(s)).is_zero():
            return s
    raise ArithmeticError("first-order term of the Jordanian R-matrix is not +-(H ^ E)")


def check_semiclassical(spec: ChainSpec, r: Bivector, rep, name="semiclassical", params=None,
                        seed=None):
    with timed() as box:
        coeff = semiclassical(spec, rep)
        s = semiclassical_sign()
        support = (coeff.matrix - evaluate_bivector(r, rep).matrix.scale(s)).nnz()
    return VerificationReport(name, support == 0, support, dict(params or {}), rep.name, seed,
                              box["elapsed"], {"sign": s})


# ---------------------------------------------------------------------------
# classical Yang-Baxter equation


def schouten(r: Bivector):
    """[[r, r]] = [r12, r13] + [r12, r23] + [r13, r23] as ``{(i, j, k): c}``."""
    g = r.algebra
    R = r.matrix_entries()
    items = list(R.items())
    out = {}

    def add(key, v):
        out[key] = out.get(key, 0) + v

    for (a, b), x in items:
        for (c, d), y in items:
            w = x * y
            for i, v in g.bracket_basis(a, c).items():
                add((i, b, d), w * v)
            for j, v in g.bracket_basis(b, c).items():
                add((a, j, d), w * v)
            for k, v in g.bracket_basis(b, d).items():
                add((a, c, k), w * v)
    return {k: v for k, v in out.items() if v}


def check_cybe(r: Bivector, g=None, name="cybe", params=None, seed=None):
    if g is not None and g is not r.algebra:
        raise BasisMismatch("bivector lives in a different algebra")
    with timed() as box:
        support = len(schouten(r))
    return VerificationReport(name, support == 0, support, dict(params or {}),
                              r.algebra.name, seed, box["elapsed"])


# ---------------------------------------------------------------------------
# carriers


def carrier(r: Bivector, g=None):
    """(basis, dim) of the subalgebra generated by the legs of r."""
    legs = r.legs()
    if not legs:
        return [], 0
    basis = subalgebra_closure(r.algebra, legs)
    return basis, len(basis)


def carrier_dim_formula(N):
    return (N * N + N - 2 * n_half(N)) // 2


def carrier_basis_labels(N):
    """Labels generating the carrier of the enlarged-chain r-matrix.

    The third block of root vectors is l = z+1..N-2, m = l+2..N.
    """
    if N < 3:
        raise IndexOutOfRange("the carrier basis needs N >= 3")
    z, n = z_max(N), n_half(N)
    labs = [Label("HP", (i - 1,)) for i in range(1, z + 1)]
    labs += [Label("Hperp", (j,)) for j in range(1, n)]
    labs += [E(l, m) for l in range(1, z) for m in range(2, z + 1) if l < m]
    labs += [E(l, m) for l in range(1, z + 1) for m in range(z + 1, N + 1)]
    labs += [E(l, m) for l in range(z + 1, N - 1) for m in range(l + 2, N + 1)]
    return labs


def carrier_basis_elements(N):
    g = build_sl(N)
    return [g.element(l) for l in carrier_basis_labels(N)]


# ---------------------------------------------------------------------------
# the injection family phi


class PhiMap:
    """phi(zeta): H^P -> H^P, H_j^perp -> -B_j, E_lm -> E_lm, A_lm or C_lm.

    C_lm = A_lm - (zeta_{N-l}/zeta_{N-l+1}) A_{l-1,m} when l-1 is itself
    in the third block, else A_lm.
    """

    def __init__(self, N, zeta):
        self.N = N
        self.g = build_sl(N)
        self.z, self.n = z_max(N), n_half(N)
        zeta = [_q(v) for v in zeta]
        if len(zeta) != self.n - 1:
            raise BadParameters(f"phi needs {self.n - 1} zeta values")
        if any(v == 0 for v in zeta):
            raise DivisionByZero("phi needs nonzero zeta")
        self.zeta = [mpq(1)] + zeta

    def _zt(self, i):
        return self.zeta[i]

    def A(self, l, m):
        N, g = self.N, self.g
        out = g.zero()
        for s in range(0, N - m + 1):
            out = out + g.element(E(l, m + s)) * self._zt(N - m - s)
        return out / self._zt(N - m)

    def B(self, j):
        N, g = self.N, self.g
        out = g.zero()
        for s in range(1, j + 1):
            out = out + g.element(E(N - j, N - j + s)) * (self._zt(j - s) / self._zt(j))
        return out - cartan_Hperp(j, N)

    def C(self, l, m):
        N = self.N
        out = self.A(l, m)
        if l - 1 >= self.z + 1:
            out = out - self.A(l - 1, m) * (self._zt(N - l) / self._zt(N - l + 1))
        return out

    def image(self, lab):
        z = self.z
        if lab.kind == "HP":
            return self.g.element(lab)
        if lab.kind == "Hperp":
            return -self.B(lab.idx[0])
        if lab.kind == "E":
            l, m = lab.idx
            if l <= z - 1 and m <= z:
                return self.g.element(lab)
            if l <= z:
                return self.A(l, m)
            return self.C(l, m)
        raise IndexOutOfRange(f"{lab} is not in the carrier basis")

    def images(self):
        return {lab: self.image(lab) for lab in carrier_basis_labels(self.N)}

    def __call__(self, x: LieElement) -> LieElement:
        dom = carrier_basis_elements(self.N)
        coords = express(x, dom)
        if coords is None:
            raise BasisMismatch("element outside the carrier")
        labs = carrier_basis_labels(self.N)
        out = self.g.zero()
        for k, v in coords.items():
            out = out + self.image(labs[k]) * v
        return out


def phi_map(N, zeta) -> PhiMap:
    return PhiMap(N, zeta)


def check_phi_homomorphism(N, zeta, name=None):
    """phi([x, y]) = [phi x, phi y] on all basis pairs, plus injectivity."""
    ph = PhiMap(N, zeta)
    labs = carrier_basis_labels(N)
    dom = carrier_basis_elements(N)
    img = [ph.image(l) for l in labs]
    with timed() as box:
        bad = 0
        for a, b in itertools.combinations(range(len(labs)), 2):
            coords = express(dom[a].bracket(dom[b]), dom)
            if coords is None:
                raise BasisMismatch("carrier basis is not closed")
            lhs = ph.g.zero()
            for k, v in coords.items():
                lhs = lhs + img[k] * v
            if lhs != img[a].bracket(img[b]):
                bad += 1
        rank = linalg.rank([x.coeffs for x in img])
    detail = {"pairs": len(labs) * (len(labs) - 1) // 2, "image_rank": rank,
              "domain_dim": len(labs), "image_equals_domain": span_equal(img, dom)}
    support = bad + (len(labs) - rank)
    return VerificationReport(name or f"phi homomorphism sl({N})", support == 0, support,
                              {"N": N, "zeta": list(zeta)}, "structure constants", None,
                              box["elapsed"], detail)


def alpha_scalings(N, psi, zeta):
    """Scaling factors alpha_lm for the root vectors E_lm, l < m."""
    z, n = z_max(N), n_half(N)
    psi, zeta = _qlist(psi, z, "psi"), _qlist(zeta, n - 1, "zeta")
    zt = [mpq(1)] + zeta

    def zeta_at(i):
        if not 0 <= i < len(zt):
            raise IndexOutOfRange(f"zeta_{i} is not defined for N={N}")
        return zt[i]

    out = {}
    for l in range(1, N):
        for m in range(l + 1, N + 1):
            if l <= z - 1 and m <= z:
                out[(l, m)] = psi[l - 1] / psi[m - 1]
            elif l <= z and m >= z + 1:
                out[(l, m)] = psi[l - 1] * zeta_at(N - m)
            elif l >= z + 1 and m >= z + 2:
                out[(l, m)] = zeta_at(N - m) / zeta_at(N - l)
    return out


def alpha(N, psi, zeta, l, m):
    table = alpha_scalings(N, psi, zeta)
    if (l, m) not in table:
        raise IndexOutOfRange(f"no scaling factor for E_{l},{m} with N={N}")
    return table[(l, m)]


# ---------------------------------------------------------------------------
# two-forms


@dataclass
class TwoForm:
    gram: list
    basis: list
    name: str = ""

    def value(self, x, y):
        cx, cy = _coords(x, self.basis), _coords(y, self.basis)
        return sum((cx[a] * self.gram[a][b] * cy[b] for a in cx for b in cy), mpq(0))

    def det(self):
        return linalg.det(self.gram)

    def is_nondegenerate(self):
        return self.det() != 0

    def to_json(self):
        return {"name": self.name, "basis": [repr(b) for b in self.basis],
                "gram": [[format_rational(v) for v in row] for row in self.gram]}


def _coords(x, basis):
    c = express(x, basis)
    if c is None:
        raise BasisMismatch("element outside the span of the form's basis")
    return c


def coboundary_form(basis, weights, name=""):
    """omega(x, y) = sum_a w_a e_a*([x, y]) with e_a* the algebra-basis duals."""
    k = len(basis)
    gram = [[mpq(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            br = basis[i].bracket(basis[j])
            v = sum((w * br.coeffs.get(a, 0) for a, w in weights.items()), mpq(0))
            gram[i][j], gram[j][i] = v, -v
    return TwoForm(gram, list(basis), name)


def _dual_functionals(basis, targets):
    """Functionals K* dual to ``targets`` w.r.t. a basis containing them.

    ``basis`` is the form's basis; ``targets`` must be among it (by
    equality).  Returns coordinate vectors over ``basis``.
    """
    out = []
    for t in targets:
        idx = [i for i, b in enumerate(basis) if b == t]
        if not idx:
            raise BasisMismatch(f"{t!r} is not a basis element of the form")
        out.append(idx[0])
    return out


def omega_JB(N, psi, zeta):
    """-sum_{l<=z, z<m<=N-l+1} (1/alpha_lm) E_lm*([,]) on the carrier basis."""
    g = build_sl(N)
    z = z_max(N)
    al = alpha_scalings(N, psi, zeta)
    weights = {}
    for l in range(1, z + 1):
        for m in range(z + 1, N - l + 2):
            if al[(l, m)] == 0:
                raise DivisionByZero(f"alpha_{l},{m} vanishes")
            weights[g.index[E(l, m)]] = -1 / al[(l, m)]
    return coboundary_form(carrier_basis_elements(N), weights, f"omega_JB sl({N})")


def _rb_basis(N):
    """K-elements first, completed to a basis of the carrier of r_RB."""
    g = build_sl(N)
    z, n = z_max(N), n_half(N)
    K = [cartan_HP(k, N) for k in range(z)] + [g.element(E(l, N - l)) for l in range(1, n)]
    rng = random.Random(0)
    m = z + n - 1
    r = r_RB(N, random_rationals(rng, z), [random_rationals(rng, m) for _ in range(m)])
    span, _ = carrier(r)
    basis = list(K)
    for x in span:
        if linalg.rank([b.coeffs for b in basis + [x]]) > len(basis):
            basis.append(x)
    return basis, K


def omega_B(N, chi):
    g = build_sl(N)
    chi = _qlist(chi, z_max(N), "chi")
    basis, _ = _rb_basis(N)
    weights = {g.index[E(k + 1, N - k)]: c for k, c in enumerate(chi)}
    return coboundary_form(basis, weights, f"omega_B sl({N})")


def omega_RB(N, chi, phi):
    form = omega_B(N, chi)
    basis, K = _rb_basis(N)
    idx = _dual_functionals(basis, K)
    if len(phi) != len(K) or any(len(row) != len(K) for row in phi):
        raise BadParameters(f"phi must be a {len(K)}x{len(K)} matrix")
    gram = [row[:] for row in form.gram]
    for m, row in enumerate(phi):
        for n_, c in enumerate(row):
            c = _q(c)
            if c:
                a, b = idx[m], idx[n_]
                gram[a][b] += c
                gram[b][a] -= c
    return TwoForm(gram, basis, f"omega_RB sl({N})")


def omega_RE(xi):
    """E*([,]) + xi H* ^ A* on L(1, 0)."""
    g = build_L(1, 0)
    basis = g.basis_elements()
    form = coboundary_form(basis, {g.index[Label("X", ("E",))]: mpq(1)}, "omega_RE")
    h, a = g.index[Label("X", ("H",))], g.index[Label("X", ("A",))]
    xi = _q(xi)
    form.gram[h][a] += xi
    form.gram[a][h] -= xi
    return form


def omega_wedge(g, x_name, y_name, c=1):
    """c * x* ^ y* on the natural basis of an abstract algebra."""
    basis = g.basis_elements()
    k = len(basis)
    gram = [[mpq(0)] * k for _ in range(k)]
    a, b = g.index[Label("X", (x_name,))], g.index[Label("X", (y_name,))]
    gram[a][b], gram[b][a] = _q(c), -_q(c)
    return TwoForm(gram, basis, f"{x_name}*^{y_name}*")


OMEGAS = {
    "omega_JB": lambda N, p: omega_JB(N, *_params(p, "psi", "zeta")),
    "omega_JE_sl3": lambda N, p: omega_JB(3, [1], _params(p, "zeta")),
    "omega_B": lambda N, p: omega_B(N, *_params(p, "chi")),
    "omega_RB": lambda N, p: omega_RB(N, *_params(p, "chi", "phi")),
    "omega_RE": lambda N, p: omega_RE(*_params(p, "xi")),
}


def omega_form(name, N=None, params=None) -> TwoForm:
    if name not in OMEGAS:
        raise UnknownFormula(name)
    return OMEGAS[name](N, params)


def cocycle_check(omega: TwoForm, g=None, name="cocycle", params=None, seed=None):
    """omega([x,y],z) + omega([y,z],x) + omega([z,x],y) = 0 on all basis triples."""
    basis = omega.basis
    with timed() as box:
        bad = 0
        for x, y, z in itertools.combinations(basis, 3):
            v = (omega.value(x.bracket(y), z) + omega.value(y.bracket(z), x)
                 + omega.value(z.bracket(x), y))
            if v:
                bad += 1
    return VerificationReport(name, bad == 0, bad, dict(params or {}), "structure constants",
                              seed, box["elapsed"])


def bivector_matrix(r: Bivector, basis):
    """Coefficient matrix R with r = sum_ab R_ab b_a (x) b_b over ``basis``."""
    k = len(basis)
    _, piv = linalg.echelon([dict(b.coeffs) for b in basis])
    piv = list(piv)
    if len(piv) != k:
        raise BasisMismatch("basis is linearly dependent")
    inv = linalg.inverse([[b.coeffs.get(p, mpq(0)) for p in piv] for b in basis])
    M = r.matrix_entries()
    pos = {p: i for i, p in enumerate(piv)}
    R = [[mpq(0)] * k for _ in range(k)]
    for (a, b), c in M.items():
        if a in pos and b in pos:
            i, j = pos[a], pos[b]
            for s in range(k):
                if inv[i][s]:
                    for t in range(k):
                        if inv[j][t]:
                            R[s][t] += c * inv[i][s] * inv[j][t]
    back = {}
    for s in range(k):
        for t in range(k):
            if R[s][t]:
                for a, x in basis[s].coeffs.items():
                    for b, y in basis[t].coeffs.items():
                        back[(a, b)] = back.get((a, b), 0) + R[s][t] * x * y
    if {key: v for key, v in back.items() if v} != M:
        raise BasisMismatch("a leg of r lies outside the span of the basis")
    return R


def frobenius_check(r: Bivector, omega: TwoForm, name="frobenius", params=None, seed=None):
    """Both matrices invertible and R * Gram a scalar multiple of the identity."""
    with timed() as box:
        R = bivector_matrix(r, omega.basis)
        G = omega.gram
        k = len(G)
        dr, dg = linalg.det(R), linalg.det(G)
        P = linalg.matmul(R, G)
        lam = P[0][0] if k else mpq(0)
        scalar = all(P[i][j] == (lam if i == j else 0) for i in range(k) for j in range(k))
        ok = dr != 0 and dg != 0 and scalar and lam != 0
    detail = {"det_r": dr, "det_omega": dg, "scalar": lam if scalar else None}
    return VerificationReport(name, ok, 0 if ok else 1, dict(params or {}),
                              "structure constants", seed, box["elapsed"], detail)


def pullback(r: Bivector, phi: PhiMap) -> Bivector:
    """(phi^{-1} (x) phi^{-1})(r) for r inside phi(g) ^ phi(g), on the standard carrier basis."""
    labs = carrier_basis_labels(phi.N)
    img = [phi.image(l) for l in labs]
    dom = carrier_basis_elements(phi.N)
    R = bivector_matrix(r, img)
    terms = []
    for a in range(len(dom)):
        for b in range(a + 1, len(dom)):
            if R[a][b]:
                terms.append((dom[a], dom[b], R[a][b]))
    return Bivector.from_terms(phi.g, terms)


# ---------------------------------------------------------------------------
# dual bracket


def cobracket(r: Bivector, x: LieElement):
    """delta_r(x) = (ad_x (x) 1 + 1 (x) ad_x)(r) as ``{(a, b): c}``."""
    g = r.algebra
    out = {}
    for (a, b), c in r.matrix_entries().items():
        for i, v in g.bracket(x, LieElement(g, {a: 1})).coeffs.items():
            out[(i, b)] = out.get((i, b), 0) + c * v
        for j, v in g.bracket(x, LieElement(g, {b: 1})).coeffs.items():
            out[(a, j)] = out.get((a, j), 0) + c * v
    return {k: v for k, v in out.items() if v}


@dataclass
class DualBracket:
    image_basis: list
    image_algebra: object
    dual_table: dict
    sign: int

    def invariants(self):
        from .liealg import structural_invariants
        return structural_invariants(self.image_algebra)


def dual_bracket(r: Bivector, g=None) -> DualBracket:
    """Dual Lie bracket on g* from r and its image under xi -> (xi (x) id)(r).

    ``sign`` is the measured s with r#([xi, eta]_*) = s [r# xi, r# eta].
    """
    alg = r.algebra
    n = alg.dim
    # dual bracket structure constants: <[e^a, e^b]_*, e_c> = delta(e_c)^{ab}
    table = {}
    for c in range(n):
        for (a, b), v in cobracket(r, LieElement(alg, {c: 1})).items():
            if a < b:
                table.setdefault((a, b), {})[c] = v
    M = r.matrix_entries()

    def sharp(vec):
        out = {}
        for (a, b), c in M.items():
            if a in vec:
                out[b] = out.get(b, 0) + vec[a] * c
        return LieElement(alg, out)

    sign = 0
    for (a, b), v in table.items():
        lhs = sharp(v)
        rhs = sharp({a: 1}).bracket(sharp({b: 1}))
        for s in (1, -1):
            if lhs == rhs * s and (sign in (0, s) or lhs.is_zero()):
                if not lhs.is_zero():
                    sign = s
                break
        else:
            raise ArithmeticError("r# is not a Lie homomorphism up to sign")
    legs = r.legs()
    image = restricted_algebra(alg, legs, "image") if legs else abstract_algebra("zero", [], {})
    return DualBracket(legs, image, table, sign or 1)


def printed_L_J_perp(xi):
    xi = _q(xi)
    return abstract_algebra("L_Jperp", ["H", "A", "B", "E"], {
        ("H", "E"): {"E": 1}, ("H", "A"): {"A": 1}, ("A", "B"): {"E": 1}, ("E", "B"): {"E": xi}})


def printed_L_R(zeta):
    zeta = _q(zeta)
    return abstract_algebra("L_R", ["H", "A", "B", "E"], {
        ("H", "E"): {"E": 1}, ("H", "A"): {"A": 1 - zeta}, ("H", "B"): {"B": zeta},
        ("A", "B"): {"E": 1}})


# ---------------------------------------------------------------------------
# structure of the sl(7) carrier


def _killing_cartans(cartans, roots):
    """Combinations of ``cartans`` commuting with every element of ``roots``."""
    g = cartans[0].algebra
    rows = {}
    for ri, r in enumerate(roots):
        for ci, h in enumerate(cartans):
            for k, v in g.bracket(h, r).coeffs.items():
                rows.setdefault((ri, k), {})[ci] = v
    null = linalg.nullspace(list(rows.values()), len(cartans))
    out = []
    for vec in null:
        x = g.zero()
        for ci, c in vec.items():
            x = x + cartans[ci] * c
        out.append(x)
    return out


def g_struct_sl7():
    """Translations plus two commuting 6-dim summands spanning the sl(7) carrier.

    The summands carry recombined Cartan elements: g_H' takes the Cartan
    part killing E46, E47, E57 and g_H'' a complement inside the part
    killing E12, E13, E23.  Returns a dict of checks and dimensions.
    """
    N = 7
    g = build_sl(N)
    e = lambda i, j: g.element(E(i, j))
    trans = [e(p, t) for p in (1, 2, 3) for t in (4, 5, 6, 7)]
    roots1 = [e(1, 2), e(1, 3), e(2, 3)]
    roots2 = [e(4, 6), e(4, 7), e(5, 7)]
    cartans = [cartan_HP(k, N) for k in range(3)] + [cartan_Hperp(i, N) for i in (1, 2, 3)]
    h1 = _killing_cartans(cartans, roots2)
    k2 = _killing_cartans(cartans, roots1)
    h2 = []
    for x in k2:
        if linalg.rank([y.coeffs for y in h1 + h2 + [x]]) > len(h1) + len(h2):
            h2.append(x)
    gh1, gh2 = h1 + roots1, h2 + roots2
    carrier_basis = carrier_basis_elements(N)

    def closed(xs):
        return len(subalgebra_closure(g, xs)) == len(xs)

    checks = {
        "translations_abelian": all(x.bracket(y).is_zero() for x in trans for y in trans),
        "translations_ideal": all(express(x.bracket(y), trans) is not None
                                  for x in carrier_basis for y in trans),
        "summand1_closed": closed(gh1),
        "summand2_closed": closed(gh2),
        "summands_commute": all(x.bracket(y).is_zero() for x in gh1 for y in gh2),
        "spans_carrier": span_equal(trans + gh1 + gh2, carrier_basis),
        "literal_summands_commute": all(
            x.bracket(y).is_zero()
            for x in [cartan_HP(k, N) for k in range(3)] + roots1
            for y in [cartan_Hperp(i, N) for i in (1, 2, 3)] + roots2),
    }
    dims = {"translations": len(trans), "summand1": len(gh1), "summand2": len(gh2),
            "carrier": len(carrier_basis)}
    return {"dims": dims, "checks": checks}


# ---------------------------------------------------------------------------
# r-matrices read off chain specifications


class NotABivector(ValueError):
    pass


def bivector_from_operator(op: TensorOp) -> Bivector:
    """Recover r in g ^ g from its image in the defining representation of sl(N)."""
    if op.rep.name != "defining" or op.legs != 2:
        raise ValueError("needs a two-leg operator in the defining representation")
    g = op.rep.algebra
    N = g.meta["N"]

    def unit(i, j):
        if i != j:
            return g.element(E(i + 1, j + 1))
        d = [mpq(0)] * N
        d[i], d[N - 1] = mpq(1), mpq(-1)
        return diag_element(g, d)

    # leg-2 matrices for each leg-1 matrix unit
    blocks = {}
    for row, cols in op.matrix.rows.items():
        i, k = divmod(row, N)
        for col, v in cols.items():
            j, l = divmod(col, N)
            blocks.setdefault((i, j), {})[(k, l)] = to_rational(v)

    def traceless(m):
        if sum((m.get((a, a), 0) for a in range(N)), mpq(0)):
            raise NotABivector("a leg is not traceless")
        x = g.zero()
        for (k, l), v in m.items():
            if k != l or k != N - 1:
                x = x + unit(k, l) * v
        return x

    diag_sum = {}
    for a in range(N):
        for key, v in blocks.get((a, a), {}).items():
            diag_sum[key] = diag_sum.get(key, 0) + v
    if any(diag_sum.values()):
        raise NotABivector("a leg is not traceless")
    coeffs = {}
    for (i, j), m in blocks.items():
        if i == j == N - 1:
            continue
        left, right = unit(i, j), traceless(m)
        for a, x in left.coeffs.items():
            for b, y in right.coeffs.items():
                coeffs[(a, b)] = coeffs.get((a, b), 0) + x * y
    coeffs = {k: v for k, v in coeffs.items() if v}
    for (a, b), v in coeffs.items():
        if a == b or coeffs.get((b, a), 0) != -v:
            raise NotABivector("coefficient matrix is not antisymmetric")
    return Bivector(g, {(a, b): v for (a, b), v in coeffs.items() if a < b})


def extract_r(spec: ChainSpec) -> Bivector:
    """Classical r-matrix of a chain, read off the first-order term of R.

    The measured semiclassical sign is divided out, so the result is
    directly comparable with the closed-form families.
    """
    g = build_sl(spec.N)
    op = semiclassical(spec, defining_rep(g))
    return bivector_from_operator(op).scale(semiclassical_sign())


def expected_r(spec: ChainSpec):
    """Closed-form r-matrix for the chain, or None when no family covers it."""
    N, enl = spec.N, spec.enlargement or {}
    vals = [l.value for l in spec.links]
    if any(l.cartan != "peripheric" or l.dressing is not None for l in spec.links):
        return None
    if any(isinstance(v, Jet) for v in vals):
        return None
    if "jordanian" in enl:
        j = enl["jordanian"]
        if any(l.kappa != 1 for l in spec.links) or j.get("substitute"):
            return None
        if spec.style == "nu_rho":
            psi, zeta = nu_rho_to_psi_zeta(vals, j.get("rho", []))
        else:
            psi, zeta = vals, j.get("zeta", [])
        return r_JB(N, psi, zeta)
    if "reshetikhin" in enl:
        # under uniform scaling the abelian factor is O(xi^2): r_RB is not its xi^1 term
        return None
    if any(l.kappa != 1 for l in spec.links):
        return None
    g = build_sl(N)
    terms = []
    for l in spec.links:
        a, b, c = l.k + 1, N - l.k, _q(l.value)
        terms.append((cartan_HP(l.k, N), g.element(E(a, b)), c))
        for s in range(a + 1, b):
            terms.append((g.element(E(a, s)), g.element(E(s, b)), c))
    return Bivector.from_terms(g, terms)
