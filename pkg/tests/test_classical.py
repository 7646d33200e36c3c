import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from twistchain import classical as C
from twistchain.liealg import build_L, build_sl, restricted_algebra, span_equal, \
    structural_invariants, z_max, n_half
from twistchain.sparse import SparseMatrix
from twistchain.tensorexpr import defining_rep, embed
from twistchain.twistlib import BadParameters, ChainSpec, LinkSpec, full_chain_spec, \
    random_rationals

coef = st.integers(-3, 3)


def _random_bivector(g, data, terms=4):
    n = g.dim
    items = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), coef),
                               min_size=1, max_size=terms))
    basis = g.basis_elements()
    return C.Bivector.from_terms(g, [(basis[a], basis[b], c) for a, b, c in items])


def _cybe_operator(r):
    """[r12, r13] + [r12, r23] + [r13, r23] in the defining rep, built independently."""
    g = r.algebra
    rep = defining_rep(g)
    d = rep.dim
    basis = g.basis_elements()

    def on(i, j):
        out = SparseMatrix(d ** 3)
        for (a, b), c in r.matrix_entries().items():
            x = embed(rep.matrix(basis[a]), i, 3, d) @ embed(rep.matrix(basis[b]), j, 3, d)
            out = out + x.scale(c)
        return out

    r12, r13, r23 = on(1, 2), on(1, 3), on(2, 3)
    return r12.commutator(r13) + r12.commutator(r23) + r13.commutator(r23)


def test_measured_semiclassical_sign():
    assert C.semiclassical_sign() == -1


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_bivector_antisymmetry(data):
    g = build_sl(3)
    r = _random_bivector(g, data)
    swapped = C.Bivector.from_terms(g, [(y, x, -c) for x, y, c in r.terms()])
    assert swapped == r
    assert (r - r).is_zero()


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_schouten_agrees_with_operator_oracle(data):
    g = build_sl(3)
    r = _random_bivector(g, data, terms=3)
    assert (len(C.schouten(r)) == 0) == _cybe_operator(r).is_zero()


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_bivector_recovered_from_defining_operator(data):
    g = build_sl(3)
    r = _random_bivector(g, data)
    op = C.evaluate_bivector(r, defining_rep(g))
    assert C.bivector_from_operator(op) == r


@pytest.mark.parametrize("N", [3, 4, 5, 7])
def test_extracted_r_matches_closed_form(N, rng):
    z, n = z_max(N), n_half(N)
    spec = full_chain_spec(N, random_rationals(rng, z), random_rationals(rng, n - 1))
    assert C.extract_r(spec) == C.expected_r(spec)
    plain = ChainSpec(N, [LinkSpec(k, 1, v) for k, v in enumerate(random_rationals(rng, z))])
    assert C.extract_r(plain) == C.expected_r(plain)


@pytest.mark.parametrize("N", range(3, 9))
def test_rewritten_jordanian_chain_form(N, rng):
    p = C.random_formula_params("r_JB", N, rng)
    assert C.r_JB(N, **p) == C.r_JB_rewritten(N, **p)


def test_fixed_size_forms_match_general(rng):
    p4 = C.random_formula_params("r_JB_sl4", 4, rng)
    assert C.r_JB_sl4(**p4) == C.r_JB(4, **p4)
    p7 = C.random_formula_params("r_JB_sl7", 7, rng)
    assert C.r_JB_sl7(**p7) == C.r_JB(7, **p7)
    assert C.r_JB_sl7_phi(**p7) == C.r_JB_sl7(**p7)
    assert C.r_JB_sl7_phi(**p7, literal=True) != C.r_JB_sl7(**p7)
    assert C.r_JE_P_sl3(mpq(4)) == C.r_JB(3, [1], [mpq(4)])


def test_formula_registry_errors():
    with pytest.raises(C.UnknownFormula):
        C.r_formula("nope", 4, {})
    with pytest.raises(BadParameters):
        C.r_formula("r_JB", 4, {"psi": [1]})
    with pytest.raises(BadParameters):
        C.r_formula("r_JB_sl4", 5, {"psi": [1, 1], "zeta": [1]})
    with pytest.raises(BadParameters):
        C.r_formula("r_JB", 4, {"psi": [1, 1], "zeta": [1], "extra": 1})


@pytest.mark.parametrize("N", range(3, 9))
def test_carrier_matches_standard_basis_count(N, rng):
    r = C.r_formula("r_JB", N, C.random_formula_params("r_JB", N, rng))
    _, dim = C.carrier(r)
    assert dim == C.carrier_dim_formula(N) == len(C.carrier_basis_labels(N))


def test_empty_carrier():
    assert C.carrier(C.Bivector(build_sl(3))) == ([], 0)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_phi_homomorphism_and_image(N, rng):
    zeta = random_rationals(rng, n_half(N) - 1)
    report = C.check_phi_homomorphism(N, zeta)
    assert report.passed
    r = C.r_JB(N, random_rationals(rng, z_max(N)), zeta)
    assert span_equal(C.carrier(r)[0], list(C.PhiMap(N, zeta).images().values()))


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_omega_jb_frobenius(N, rng):
    psi, zeta = random_rationals(rng, z_max(N)), random_rationals(rng, n_half(N) - 1)
    form = C.omega_JB(N, psi, zeta)
    assert form.det() != 0
    assert C.cocycle_check(form).passed
    r = C.pullback(C.r_JB(N, psi, zeta), C.PhiMap(N, zeta))
    report = C.frobenius_check(r, form)
    assert report.passed and report.detail["scalar"] == 1


def test_frobenius_rejects_foreign_basis():
    form = C.omega_JB(4, [1, 1], [1])
    with pytest.raises(C.BasisMismatch):
        C.bivector_matrix(C.r_B_canonical(4, [1, 1]), form.basis[:3])


@pytest.mark.parametrize("N", [4, 5])
def test_omega_rb_reduces_to_omega_b(N, rng):
    chi = random_rationals(rng, z_max(N))
    K = z_max(N) + n_half(N) - 1
    a = C.omega_RB(N, chi, [[0] * K for _ in range(K)])
    b = C.omega_B(N, chi)
    assert a.gram == b.gram
    assert C.cocycle_check(b).passed


def test_omega_rb_generic_phi_is_not_closed(rng):
    N, K = 4, 3
    phi = [random_rationals(rng, K) for _ in range(K)]
    assert not C.cocycle_check(C.omega_RB(N, [1, 1], phi)).passed


@pytest.mark.parametrize("xi", [1, mpq(2, 3), -3])
def test_omega_re(xi):
    form = C.omega_RE(xi)
    assert C.cocycle_check(form).passed
    assert form.det() != 0


def test_wedge_cocycle_controls():
    assert C.cocycle_check(C.omega_wedge(build_L(mpq(1, 2), mpq(1, 2)), "H", "A")).passed
    assert not C.cocycle_check(C.omega_wedge(build_L(1, 0), "H", "E")).passed


def test_dual_brackets_match_printed_tables():
    for r, printed in ((C.r_JE_sl3(mpq(3)), C.printed_L_J_perp(mpq(3))),
                       (C.r_RE_sl3(mpq(3)), C.printed_L_R(mpq(3)))):
        d = C.dual_bracket(r)
        assert len(d.image_basis) == 4
        assert d.invariants() == structural_invariants(printed)


def test_jj_and_je_carriers_isomorphic_not_equal():
    g = build_sl(3)
    a = C.carrier(C.r_JJ_sl3(mpq(3)))[0]
    b = C.carrier(C.r_JE_P_sl3(mpq(3)))[0]
    assert structural_invariants(restricted_algebra(g, a)) == \
        structural_invariants(restricted_algebra(g, b))
    assert not span_equal(a, b)


def test_sl7_structure():
    gs = C.g_struct_sl7()
    assert gs["dims"] == {"translations": 12, "summand1": 6, "summand2": 6, "carrier": 24}
    checks = dict(gs["checks"])
    assert checks.pop("literal_summands_commute") is False
    assert all(checks.values())
