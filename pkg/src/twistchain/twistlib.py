"""Constructors for the twisting elements: basic factors, links, chains
and their Jordanian / Reshetikhin enlargements.

Every constructor returns a two-leg :class:`~twistchain.tensorexpr.Expr`.
Products are written left to right exactly as they act: in a chain the
later link stands on the left.  Scalar parameters may be rationals or
jets; scaling always sits in the coefficient, never in the generator.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .exactring import Jet, format_rational, to_rational
from .liealg import (E, H, IndexOutOfRange, LieElement, build_L, build_sl, cartan_HP,
                     cartan_HR, cartan_Hperp, diag_element, n_half, z_max)
from .tensorexpr import ONE, Exp, Gen, Prod, Scale, Sum, sigma


class CarrierViolation(ValueError):
    pass


class TooManyLinks(ValueError):
    pass


class BadParameters(ValueError):
    pass


def _s(x):
    if isinstance(x, Jet):
        return x
    try:
        return to_rational(x)
    except (TypeError, ValueError) as exc:
        raise BadParameters(str(exc)) from None


def _expect(g, lhs, rhs, what):
    if g.bracket(lhs[0], lhs[1]) != rhs:
        raise CarrierViolation(what)


# ---------------------------------------------------------------------------
# basic factors


def jordanian(Hx: LieElement, Ex: LieElement, xi=1) -> Exp:
    """exp(H (x) ln(1 + xi E)); requires [H, E] = E."""
    _expect(Hx.algebra, (Hx, Ex), Ex, "Jordanian factor needs [H, E] = E")
    return Exp(Prod((Gen(Hx, 1), sigma(Ex, 2, _s(xi)))))


def _dressed(right_leg_expr, beta, Ex, xi):
    if beta:
        return Prod((right_leg_expr, Exp(Scale(-_s(beta), sigma(Ex, 2, xi)))))
    return right_leg_expr


def _check_heisenberg(A, B, Ex):
    g = A.algebra
    _expect(g, (A, B), Ex, "extension needs [A, B] = E")
    if not g.bracket(Ex, A).is_zero() or not g.bracket(Ex, B).is_zero():
        raise CarrierViolation("extension needs E central in span{A, B, E}")


def extension(A: LieElement, B: LieElement, beta, Ex: LieElement, coeff=1, xi=1) -> Exp:
    """exp(coeff * A (x) B e^{-beta sigma}), sigma = ln(1 + xi E)."""
    _check_heisenberg(A, B, Ex)
    xi = _s(xi)
    body = Prod((Scale(_s(coeff), Gen(A, 1)), _dressed(Gen(B, 2), beta, Ex, xi)))
    return Exp(body)


def extension_primed(A: LieElement, B: LieElement, alpha, Ex: LieElement, coeff=1, xi=1) -> Exp:
    """exp(-coeff * B (x) A e^{-alpha sigma})."""
    _check_heisenberg(A, B, Ex)
    xi = _s(xi)
    body = Prod((Scale(-_s(coeff), Gen(B, 1)), _dressed(Gen(A, 2), alpha, Ex, xi)))
    return Exp(body)


def reshetikhin(pairs) -> Exp:
    """exp(sum c * x (x) y) for (c, x_expr_leg1, y_expr_leg2) triples of one-leg expressions."""
    terms = tuple(Scale(_s(c), Prod((x, y))) for c, x, y in pairs)
    return Exp(Sum(terms))


# ---------------------------------------------------------------------------
# links and chains


def _check_k(k, N):
    if not (0 <= k and k + 1 < N - k):
        raise IndexOutOfRange(f"link index k={k} invalid for N={N}")


def link(k, N, ext_coeff=1, sigma_coeff=1, cartan="peripheric", dressing=None):
    """One link: extension factors for s=k+2..N-k-1, then the Jordanian factor.

    ``cartan`` selects H^P (peripheric, undressed by default) or
    H_{k+1,N-k} (canonical, dressing 1/2 by default).
    """
    _check_k(k, N)
    g = build_sl(N)
    a, b = k + 1, N - k
    if cartan == "peripheric":
        Hx = cartan_HP(k, N)
        beta = mpq(0) if dressing is None else _s(dressing)
    elif cartan == "canonical":
        Hx = g.element(H(a, b))
        beta = mpq(1, 2) if dressing is None else _s(dressing)
    else:
        raise BadParameters(f"unknown cartan choice {cartan!r}")
    Ex = g.element(E(a, b))
    sc = _s(sigma_coeff)
    factors = []
    c = _s(ext_coeff)
    if c:
        for s in range(k + 2, N - k):
            A, B = g.element(E(a, s)), g.element(E(s, b))
            body = Prod((Scale(c, Gen(A, 1)), _dressed(Gen(B, 2), beta, Ex, sc)))
            factors.append(Exp(body))
    factors.append(Exp(Prod((Gen(Hx, 1), sigma(Ex, 2, sc)))))
    return _prod(factors)


def _prod(factors):
    factors = [f for f in factors if f is not ONE]
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    return Prod(tuple(factors))


def canonical_link(k, N, psi=1):
    return link(k, N, psi, psi, cartan="canonical")


def peripheric_link(k, N, psi=1):
    return link(k, N, psi, psi, cartan="peripheric")


def reshetikhin_cartan_factor(k, N, psi=1):
    """exp(H^R_{k+1,N-k} (x) sigma_{k+1,N-k}(psi))."""
    g = build_sl(N)
    return Exp(Prod((Gen(cartan_HR(k, N), 1), sigma(g.element(E(k + 1, N - k)), 2, _s(psi)))))


def _psi_list(N, psi):
    psi = [_s(p) for p in psi]
    if len(psi) > z_max(N):
        raise TooManyLinks(f"sl({N}) admits at most {z_max(N)} links, got {len(psi)}")
    return psi


def peripheric_chain(N, psi=None):
    """Product of peripheric links, later links leftmost."""
    if psi is None:
        psi = [1] * z_max(N)
    psi = _psi_list(N, psi)
    return _prod([peripheric_link(k, N, p) for k, p in reversed(list(enumerate(psi)))])


def canonical_chain(N, psi=None):
    if psi is None:
        psi = [1] * z_max(N)
    psi = _psi_list(N, psi)
    return _prod([canonical_link(k, N, p) for k, p in reversed(list(enumerate(psi)))])


def rearranged_chain(N, psi=None):
    """Reshetikhin Cartan factors collected on the left of the peripheric chain."""
    if psi is None:
        psi = [1] * z_max(N)
    psi = _psi_list(N, psi)
    resh = [reshetikhin_cartan_factor(k, N, p) for k, p in reversed(list(enumerate(psi)))]
    return _prod(resh + [peripheric_chain(N, psi)])


def factorized_link(k, N, psi=1):
    return Prod((reshetikhin_cartan_factor(k, N, psi), peripheric_link(k, N, psi)))


# ---------------------------------------------------------------------------
# enlargements


def nu_rho_to_psi_zeta(nu, rho):
    """psi_l = nu_l prod_{r<l} nu_r/rho_r ; zeta_i = prod_{r<=i} rho_r/nu_r."""
    nu = [_s(v) for v in nu]
    rho = [_s(v) for v in rho]
    psi, acc = [], mpq(1)
    for l, v in enumerate(nu):
        psi.append(v * acc)
        if l < len(rho):
            acc = acc * v / rho[l]
    zeta, acc = [], mpq(1)
    for i, r in enumerate(rho):
        acc = acc * r / nu[i]
        zeta.append(acc)
    return psi, zeta


def _kappas(kappa, z):
    if kappa is None:
        return [1] * z
    kappa = list(kappa)
    if len(kappa) != z or any(int(v) not in (0, 1) or v != int(v) for v in kappa):
        raise BadParameters(f"kappa must be {z} values in {{0, 1}}")
    return [int(v) for v in kappa]


def enlarged_chain_J(N, psi=None, zeta=None, kappa=None, *, nu=None, rho=None,
                     substitute=False):
    """Full peripheric chain enlarged by the additional Jordanian factors.

    Pass either ``psi``/``zeta`` or ``nu``/``rho``.  Link k carries the
    extension coefficient psi_{k+1} zeta_k kappa_{k+1} and sigma argument
    psi_{k+1} zeta_k (zeta_0 = 1); factor i carries sigma_i(psi_i kappa_i zeta_i).
    In the nu/rho style these become nu_{k+1} kappa_{k+1}, nu_{k+1} and
    kappa_i rho_i.  With ``substitute`` a switched-off link l keeps its
    additional factor as exp(H_l^perp (x) sigma_{N-l,N-l+1}(rho_l)).
    """
    z, n = z_max(N), n_half(N)
    if N < 3:
        raise BadParameters("enlargement needs N >= 3")
    kap = _kappas(kappa, z)
    if nu is not None or rho is not None:
        if psi is not None or zeta is not None:
            raise BadParameters("mix of psi/zeta and nu/rho parameters")
        nu = [_s(v) for v in nu]
        rho = [_s(v) for v in rho]
        if len(nu) != z or len(rho) != n - 1:
            raise BadParameters(f"need {z} nu and {n - 1} rho values")
        link_ext = [nu[k] * kap[k] for k in range(z)]
        link_sig = list(nu)
        add = [kap[i] * rho[i] for i in range(n - 1)]
        rho_sub = list(rho)
    else:
        psi = [_s(v) for v in (psi if psi is not None else default_psi(z))]
        zeta = [_s(v) for v in (zeta if zeta is not None else default_zeta(n - 1))]
        if len(psi) != z or len(zeta) != n - 1:
            raise BadParameters(f"need {z} psi and {n - 1} zeta values")
        zeta0 = [mpq(1)] + zeta
        link_ext = [psi[k] * zeta0[k] * kap[k] for k in range(z)]
        link_sig = [psi[k] * zeta0[k] for k in range(z)]
        add = [psi[i] * kap[i] * zeta[i] for i in range(n - 1)]
        rho_sub = [psi[i] * zeta[i] for i in range(n - 1)]
    g = build_sl(N)
    factors = []
    for i in range(1, n):
        Hp = cartan_Hperp(i, N)
        if kap[i - 1] == 0 and substitute:
            Ex = g.element(E(N - i, N - i + 1))
            factors.append(Exp(Prod((Gen(Hp, 1), sigma(Ex, 2, rho_sub[i - 1])))))
        elif add[i - 1]:
            Ex = g.element(E(i, N - i))
            factors.append(Exp(Prod((Gen(Hp, 1), sigma(Ex, 2, add[i - 1])))))
    for k in reversed(range(z)):
        factors.append(link(k, N, link_ext[k], link_sig[k]))
    return _prod(factors)


def primitive_set(N, psi=None):
    """The commuting primitive elements {sigma_k, E^P_l} as one-leg builders.

    Returns a list of functions ``leg -> Expr``.
    """
    z, n = z_max(N), n_half(N)
    psi = [_s(v) for v in (psi if psi is not None else [1] * z)]
    g = build_sl(N)
    out = []
    for k in range(z):
        Ex = g.element(E(k + 1, N - k))
        out.append(lambda leg, Ex=Ex, c=psi[k]: sigma(Ex, leg, c))
    for l in range(1, n):
        Ex = g.element(E(l, N - l))
        out.append(lambda leg, Ex=Ex: Gen(Ex, leg))
    return out


def enlarged_chain_R(N, beta, psi=None):
    """exp(beta^{mn} I_m (x) I_n) times the full peripheric chain."""
    z = z_max(N)
    psi = [_s(v) for v in (psi if psi is not None else [1] * z)]
    prims = primitive_set(N, psi)
    m = len(prims)
    if len(beta) != m or any(len(row) != m for row in beta):
        raise BadParameters(f"beta must be a {m}x{m} matrix")
    terms = []
    for a in range(m):
        for b in range(m):
            c = _s(beta[a][b])
            if c:
                terms.append(Scale(c, Prod((prims[a](1), prims[b](2)))))
    chain = peripheric_chain(N, psi)
    if not terms:
        return chain
    return Prod((Exp(Sum(tuple(terms))), chain))


# ---------------------------------------------------------------------------
# sl(3) and the abstract carriers


def sl3_generators():
    g = build_sl(3)
    return {
        "HP": cartan_HP(0, 3),
        "Hperp": cartan_Hperp(1, 3),
        "Hperp12": diag_element(g, [mpq(1, 3), mpq(1, 3), mpq(-2, 3)]),
        "A": g.element(E(1, 2)),
        "B": g.element(E(2, 3)),
        "E": g.element(E(1, 3)),
    }


def sl3_specials(psi=1, vs=1, zeta=1):
    """F_JE^P(psi, vs), F_RE(psi, zeta) and F_JJ(vs, psi) on sl(3)."""
    s = sl3_generators()
    psi, vs, zeta = _s(psi), _s(vs), _s(zeta)
    pet = Prod((Exp(Prod((Scale(psi, Gen(s["A"], 1)), Gen(s["B"], 2)))),
                Exp(Prod((Gen(s["HP"], 1), sigma(s["E"], 2, psi))))))
    f_je = Prod((Exp(Prod((Gen(s["Hperp"], 1), sigma(s["A"], 2, vs)))), pet))
    f_re = Prod((Exp(Prod((Scale(zeta, Gen(s["Hperp"], 1)), sigma(s["E"], 2, psi)))), pet))
    f_jj = Prod((Exp(Prod((Gen(s["Hperp"], 1), sigma(s["A"], 2, vs)))),
                 Exp(Prod((Gen(s["Hperp12"], 1), sigma(s["E"], 2, psi))))))
    return {"F_JE_P": f_je, "F_RE": f_re, "F_JJ": f_jj}


def L_generators(alg):
    return {name: alg.element(name) for name in ("H", "A", "B", "E")}


def extended_jordanian(alpha, beta, xi=1, primed=False):
    """Extension factor times Jordanian factor on L(alpha, beta)."""
    alg = build_L(alpha, beta)
    s = L_generators(alg)
    xi = _s(xi)
    if primed:
        ext = extension_primed(s["A"], s["B"], alg.meta["alpha"], s["E"], xi, xi)
    else:
        ext = extension(s["A"], s["B"], alg.meta["beta"], s["E"], xi, xi)
    return Prod((ext, jordanian(s["H"], s["E"], xi)))


def pet(xi=1):
    """Peripheric extended twist exp(A (x) B) exp(H (x) sigma) on L(1, 0)."""
    return extended_jordanian(1, 0, xi)


def pet_reshetikhin(psi=1, xi=1):
    """exp(psi A (x) sigma) times the PET on L(1, 0)."""
    alg = build_L(1, 0)
    s = L_generators(alg)
    xi = _s(xi)
    resh = Exp(Prod((Scale(_s(psi), Gen(s["A"], 1)), sigma(s["E"], 2, xi))))
    return Prod((resh, pet(xi)))


# ---------------------------------------------------------------------------
# parameters


def default_psi(z):
    return [mpq(1, l) for l in range(1, z + 1)]


def default_zeta(m):
    return [mpq(i) for i in range(1, m + 1)]


def random_rationals(rng: random.Random, count, lo=1, hi=9):
    """Nonzero rationals p/q with |p| <= hi, 1 <= q <= hi."""
    out = []
    for _ in range(count):
        p = 0
        while p == 0:
            p = rng.randint(-hi, hi)
        out.append(mpq(p, rng.randint(lo, hi)))
    return out


def parameter_points(z, m, seed=0, extra=2):
    """Default (psi, zeta) point followed by ``extra`` seeded random points."""
    pts = [(default_psi(z), default_zeta(m))]
    rng = random.Random(seed)
    for _ in range(extra):
        pts.append((random_rationals(rng, z), random_rationals(rng, m)))
    return pts


# ---------------------------------------------------------------------------
# JSON chain specifications


@dataclass
class LinkSpec:
    k: int
    kappa: int = 1
    value: object = mpq(1)
    cartan: str = "peripheric"
    dressing: object = None


@dataclass
class ChainSpec:
    N: int
    links: list
    style: str = "psi_zeta"
    enlargement: dict | None = None
    extra: dict = field(default_factory=dict)

    # -- validation ---------------------------------------------------
    def validate(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise BadParameters("N must be an integer >= 2")
        if self.style not in ("psi_zeta", "nu_rho"):
            raise BadParameters(f"unknown parameter style {self.style!r}")
        ks = [l.k for l in self.links]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise BadParameters("link indices must be strictly increasing")
        for l in self.links:
            _check_k(l.k, self.N)
            if l.kappa not in (0, 1):
                raise BadParameters("kappa must be 0 or 1")
        if len(self.links) > z_max(self.N):
            raise TooManyLinks(f"sl({self.N}) admits at most {z_max(self.N)} links")
        if self.enlargement:
            if ks != list(range(z_max(self.N))):
                raise BadParameters("enlargements need the full chain of links 0..z-1")
            if any(l.cartan != "peripheric" or l.dressing is not None for l in self.links):
                raise BadParameters("enlargements need plain peripheric links")
            kinds = set(self.enlargement)
            if not kinds <= {"jordanian", "reshetikhin"} or len(kinds) != 1:
                raise BadParameters("enlargement must be 'jordanian' or 'reshetikhin'")
        return self

    # -- construction -------------------------------------------------
    def build(self):
        self.validate()
        N = self.N
        enl = self.enlargement or {}
        vals = [l.value for l in self.links]
        if "jordanian" in enl:
            j = enl["jordanian"]
            kappa = [l.kappa for l in self.links]
            sub = bool(j.get("substitute", False))
            if self.style == "nu_rho":
                return enlarged_chain_J(N, kappa=kappa, nu=vals, rho=j.get("rho", []),
                                        substitute=sub)
            return enlarged_chain_J(N, vals, j.get("zeta", []), kappa, substitute=sub)
        if "reshetikhin" in enl:
            if self.style != "psi_zeta":
                raise BadParameters("the Reshetikhin enlargement uses psi parameters")
            return enlarged_chain_R(N, enl["reshetikhin"].get("beta", []), vals)
        factors = []
        for l in reversed(self.links):
            c = _s(l.value)
            factors.append(link(l.k, N, c * l.kappa, c, l.cartan, l.dressing))
        return _prod(factors)

    def algebra(self):
        return build_sl(self.N)

    def scaled(self, xi: Jet):
        """Copy with every continuous parameter multiplied by ``xi``.

        In the psi_zeta style zeta is left alone (the link parameters
        already carry the overall scale); in nu_rho both nu and rho scale.
        Reshetikhin coefficients scale too.
        """
        links = [LinkSpec(l.k, l.kappa, _s(l.value) * xi, l.cartan, l.dressing) for l in self.links]
        enl = None
        if self.enlargement:
            enl = json.loads(json.dumps(self.enlargement, default=_fmt))
            if "jordanian" in enl and self.style == "nu_rho":
                enl["jordanian"]["rho"] = [_s(r) * xi for r in enl["jordanian"]["rho"]]
            elif "jordanian" in enl:
                enl["jordanian"]["zeta"] = [_s(r) for r in enl["jordanian"]["zeta"]]
            if "reshetikhin" in enl:
                enl["reshetikhin"]["beta"] = [[_s(b) * xi for b in row]
                                              for row in enl["reshetikhin"]["beta"]]
        return ChainSpec(self.N, links, self.style, enl, dict(self.extra))

    def params(self):
        key = "psi" if self.style == "psi_zeta" else "nu"
        out = {key: [l.value for l in self.links], "kappa": [l.kappa for l in self.links]}
        if self.enlargement:
            for kind, body in self.enlargement.items():
                for name, v in body.items():
                    out[name] = v
        return out

    # -- JSON ---------------------------------------------------------
    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise BadParameters("chain spec must be a JSON object")
        try:
            N = d["N"]
            style = d.get("parameter_style", "psi_zeta")
            key = "psi" if style == "psi_zeta" else "nu"
            links = []
            for item in d.get("links", []):
                links.append(LinkSpec(
                    k=int(item["k"]),
                    kappa=int(item.get("kappa", 1)),
                    value=_s(item.get(key, "1")),
                    cartan=item.get("cartan", "peripheric"),
                    dressing=None if item.get("dressing") is None else _s(item["dressing"]),
                ))
        except (KeyError, TypeError, ValueError) as exc:
            raise BadParameters(f"malformed chain spec: {exc}") from None
        enl = d.get("enlargement")
        if enl is not None and not isinstance(enl, dict):
            raise BadParameters("enlargement must be an object")
        spec = cls(N, links, style, enl or None)
        if "links" not in d:
            spec.links = [LinkSpec(k) for k in range(z_max(N))] if isinstance(N, int) else []
        return spec.validate()

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BadParameters(f"invalid JSON: {exc}") from None
        return cls.from_dict(d)

    def to_dict(self):
        key = "psi" if self.style == "psi_zeta" else "nu"
        links = []
        for l in self.links:
            item = {"k": l.k, "kappa": l.kappa, key: _fmt(l.value)}
            if l.cartan != "peripheric":
                item["cartan"] = l.cartan
            if l.dressing is not None:
                item["dressing"] = _fmt(l.dressing)
            links.append(item)
        d = {"schema": "1", "N": self.N, "parameter_style": self.style, "links": links}
        if self.enlargement:
            d["enlargement"] = json.loads(json.dumps(self.enlargement, default=_fmt))
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_fmt)


def _fmt(v):
    if isinstance(v, Jet):
        return v.to_json()
    return format_rational(v)


def full_chain_spec(N, psi=None, zeta=None, kappa=None):
    """Spec for the full chain, Jordanian-enlarged when ``zeta`` is given."""
    z = z_max(N)
    psi = psi if psi is not None else default_psi(z)
    kappa = kappa if kappa is not None else [1] * z
    links = [LinkSpec(k, kappa[k], _s(psi[k])) for k in range(z)]
    enl = None
    if zeta is not None:
        enl = {"jordanian": {"zeta": [_fmt(_s(x)) for x in zeta]}}
    return ChainSpec(N, links, "psi_zeta", enl).validate()
