"""The thirteen acceptance criteria, one test each.

Every test records a one-line verdict (printed immediately and repeated in
the terminal summary) before asserting, so a failing criterion still shows
up in the summary with its reason.
"""
import random
import time

from gmpy2 import mpq

from conftest import record
from twistchain import classical as C
from twistchain import hopfverify as HV
from twistchain.liealg import (E, H, build_L, build_sl, cohomology_H2_dim, n_half, span_equal,
                               z_max)
from twistchain.tensorexpr import defining_rep
from twistchain.twistlib import (canonical_chain, canonical_link, enlarged_chain_J,
                                 enlarged_chain_R, extended_jordanian, factorized_link,
                                 full_chain_spec, jordanian, nu_rho_to_psi_zeta, pet,
                                 peripheric_chain, random_rationals, rearranged_chain,
                                 sl3_specials)

POINTS = 3


def _constructions():
    """(label, twist, defining rep) for everything named in criterion 1."""
    rng = random.Random(1)
    out = []
    sl2 = build_sl(2)
    for _ in range(POINTS):
        xi = random_rationals(rng, 1)[0]
        out.append((f"jordanian sl2 xi={xi}",
                    jordanian(sl2.element(H(1, 2)), sl2.element(E(1, 2)), xi), defining_rep(sl2)))
        out.append((f"extended jordanian L(1/2,1/2) xi={xi}",
                    extended_jordanian(mpq(1, 2), mpq(1, 2), xi),
                    defining_rep(build_L(mpq(1, 2), mpq(1, 2)))))
        out.append((f"PET L(1,0) xi={xi}", pet(xi), defining_rep(build_L(1, 0))))
    for N in range(3, 9):
        rep = defining_rep(build_sl(N))
        for _ in range(POINTS):
            psi = random_rationals(rng, z_max(N))
            out.append((f"peripheric chain sl({N}) psi={psi}", peripheric_chain(N, psi), rep))
    for N in (4, 7):
        rep = defining_rep(build_sl(N))
        for _ in range(POINTS):
            psi, zeta = random_rationals(rng, z_max(N)), random_rationals(rng, n_half(N) - 1)
            out.append((f"jordanian-enlarged sl({N})", enlarged_chain_J(N, psi, zeta), rep))
    rep4 = defining_rep(build_sl(4))
    for _ in range(POINTS):
        psi = random_rationals(rng, 2)
        beta = [random_rationals(rng, 3) for _ in range(3)]
        out.append(("reshetikhin-enlarged sl(4)", enlarged_chain_R(4, beta, psi), rep4))
    rep3 = defining_rep(build_sl(3))
    for _ in range(POINTS):
        psi, vs, zeta = random_rationals(rng, 3)
        for name, F in sl3_specials(psi, vs, zeta).items():
            out.append((f"sl3 {name}", F, rep3))
    return out


def _verdict(number, title, failures):
    ok = record(number, title, not failures)
    assert ok, "; ".join(failures)


def test_criterion_01_drinfeld():
    t0 = time.perf_counter()
    items = _constructions()
    failures = [f"{label}: {r.residual_support}" for label, F, rep in items
                for r in [HV.check_drinfeld(F, rep)] if not r.passed]
    elapsed = time.perf_counter() - t0
    if elapsed > 60:
        failures.append(f"took {elapsed:.1f}s")
    _verdict(1, f"Drinfeld equation exact for {len(items)} constructions ({elapsed:.1f}s)",
             failures)


def test_criterion_02_counit():
    items = _constructions()
    failures = [label for label, F, rep in items if not HV.check_counit(F, rep).passed]
    _verdict(2, f"counit conditions exact on both legs for {len(items)} constructions", failures)


def test_criterion_03_qybe():
    items = _constructions()
    failures = [label for label, F, rep in items
                if not HV.check_qybe(HV.r_matrix(F, rep)).passed]
    _verdict(3, f"QYBE exact for {len(items)} R-matrices", failures)


def test_criterion_04_coproduct_tables():
    failures = []
    L, rows = HV.pet_table()
    r = HV.check_coproduct_table(pet(), rows, defining_rep(L))
    if not r.passed or len(rows) != 4:
        failures.append(f"PET table {r.detail['rows']}")
    chains = {"delta_pb": (HV.delta_pb_table, peripheric_chain(4)),
              "delta_jb": (HV.delta_jb_table, enlarged_chain_J(4, [1, 1], [1]))}
    for name, (table, F) in chains.items():
        g, rows = table()
        rep = defining_rep(g)
        r = HV.check_coproduct_table(F, rows, rep)
        if not r.passed or len(rows) != 9:
            failures.append(f"{name} {r.detail['rows']}")
        # the literal printed rows differ exactly in the documented misprints
        g, printed = table(printed=True)
        bad = {k for k, s in HV.check_coproduct_table(F, printed, rep).detail["rows"].items()
               if s}
        if bad != set(HV.MISPRINTS[name]):
            failures.append(f"{name} printed failures {sorted(bad)}")
    _verdict(4, "coproduct tables exact: PET 4 rows, Delta_PB 9 rows, Delta_JB 9 rows "
                "(5 misprinted rows corrected, printed forms shown to fail)", failures)


def test_criterion_05_factorization_and_rearrangement():
    rng = random.Random(5)
    failures = []
    for N in (4, 5):
        rep = defining_rep(build_sl(N))
        psi = random_rationals(rng, z_max(N))
        if not HV.operators_equal(rearranged_chain(N, psi), canonical_chain(N, psi), rep).passed:
            failures.append(f"rearrangement sl({N})")
        for k in range(z_max(N)):
            if not HV.operators_equal(factorized_link(k, N, psi[k]),
                                      canonical_link(k, N, psi[k]), rep).passed:
                failures.append(f"factorization sl({N}) link {k}")
    _verdict(5, "factorized link and rearranged chain equal canonical forms for N = 4, 5",
             failures)


def test_criterion_06_carrier_dimensions():
    rng = random.Random(6)
    failures = []
    fixed = {3: C.r_JE_P_sl3(random_rationals(rng, 1)[0]),
             4: C.r_JB_sl4(random_rationals(rng, 2), random_rationals(rng, 1)),
             7: C.r_JB_sl7(random_rationals(rng, 3), random_rationals(rng, 3))}
    for N, want in ((3, 4), (4, 8), (7, 24)):
        got = C.carrier(fixed[N])[1]
        if got != want:
            failures.append(f"sl({N}) carrier {got} != {want}")
    for N in range(3, 9):
        r = C.r_JB(N, random_rationals(rng, z_max(N)), random_rationals(rng, n_half(N) - 1))
        got = C.carrier(r)[1]
        if got != C.carrier_dim_formula(N):
            failures.append(f"sl({N}) closure {got} != {C.carrier_dim_formula(N)}")
    _verdict(6, "carrier dims 4, 8, 24 and (N^2+N-2n)/2 for N = 3..8", failures)


def test_criterion_07_second_cohomology():
    a = cohomology_H2_dim(build_L(1, 0))
    b = cohomology_H2_dim(build_L(mpq(1, 2), mpq(1, 2)))
    failures = []
    if a != 1:
        failures.append(f"dim H2 L(1,0) = {a}")
    if b != 0:
        failures.append(f"dim H2 L(1/2,1/2) = {b}")
    _verdict(7, "dim H2(L(1,0)) = 1 and dim H2(L(1/2,1/2)) = 0", failures)


def test_criterion_08_semiclassical():
    rng = random.Random(8)
    failures = []
    zeta3 = random_rationals(rng, 1)
    psi4, zeta4 = random_rationals(rng, 2), random_rationals(rng, 1)
    psi7, zeta7 = random_rationals(rng, 3), random_rationals(rng, 3)
    cases = [(3, [1], zeta3, C.r_JE_P_sl3(zeta3[0])),
             (4, psi4, zeta4, C.r_JB_sl4(psi4, zeta4)),
             (7, psi7, zeta7, C.r_JB_sl7(psi7, zeta7))]
    for N, psi, zeta, r in cases:
        rep = defining_rep(build_sl(N))
        report = C.check_semiclassical(full_chain_spec(N, psi, zeta), r, rep)
        if not report.passed:
            failures.append(f"sl({N}): {report.residual_support}")
    sign = C.semiclassical_sign()
    _verdict(8, f"xi^1 coefficient of R equals printed r for sl(3), sl(4), sl(7) "
                f"(measured sign {sign:+d})", failures)


def test_criterion_09_cybe():
    rng = random.Random(9)
    failures, count = [], 0
    for name in sorted(C.FORMULAS):
        sizes = [None] if name in C.FIXED_N else [4, 5, 7]
        for N in sizes:
            for _ in range(POINTS):
                p = C.random_formula_params(name, N, rng)
                r = C.r_formula(name, N, p)
                count += 1
                if not C.check_cybe(r).passed:
                    failures.append(f"{name} N={N}")
    _verdict(9, f"Schouten bracket vanishes for all {len(C.FORMULAS)} families ({count} points)",
             failures)


def test_criterion_10_phi_and_rewrites():
    rng = random.Random(10)
    failures = []
    for N in (4, 7):
        zeta = random_rationals(rng, n_half(N) - 1)
        psi = random_rationals(rng, z_max(N))
        report = C.check_phi_homomorphism(N, zeta)
        if not report.passed:
            failures.append(f"phi sl({N}) bracket/injectivity residual {report.residual_support}")
        carrier = C.carrier(C.r_JB(N, psi, zeta))[0]
        if not span_equal(carrier, list(C.PhiMap(N, zeta).images().values())):
            failures.append(f"phi sl({N}) image is not the carrier")
    for N in range(3, 9):
        p = C.random_formula_params("r_JB", N, rng)
        if C.r_JB_rewritten(N, **p) != C.r_JB(N, **p):
            failures.append(f"rewritten chain form sl({N})")
    p = C.random_formula_params("r_JB_sl7", 7, rng)
    if C.r_JB_sl7_phi(**p) != C.r_JB_sl7(**p):
        failures.append("sl(7) phi-basis form")
    _verdict(10, "phi preserves all brackets and is injective onto the carrier (N = 4, 7); "
                 "both rewrites exact", failures)


def test_criterion_11_omega_forms():
    rng = random.Random(11)
    failures = []
    for N in range(3, 8):
        form = C.omega_JB(N, random_rationals(rng, z_max(N)), random_rationals(rng, n_half(N) - 1))
        if form.det() == 0:
            failures.append(f"omega_JB sl({N}) degenerate")
    for N in (4, 5, 7):
        chi = random_rationals(rng, z_max(N))
        K = z_max(N) + n_half(N) - 1
        a, b = C.omega_RB(N, chi, [[0] * K for _ in range(K)]), C.omega_B(N, chi)
        if a.gram != b.gram or not span_equal(a.basis, b.basis):
            failures.append(f"omega_RB(phi=0) != omega_B sl({N})")
    for xi in (1, mpq(2, 3), -3):
        if not C.cocycle_check(C.omega_RE(xi)).passed:
            failures.append(f"omega_RE xi={xi}")
    _verdict(11, "omega_JB nondegenerate N = 3..7; omega_RB(phi=0) = omega_B; "
                 "omega_RE is a 2-cocycle", failures)


def test_criterion_12_matreshka():
    failures = [f"sl({N}) k={k}: {r.detail['rows']}"
                for N in (6, 7) for k in (1, 2)
                for r in [HV.check_matreshka(N, k)] if not r.passed]
    _verdict(12, "embedded sl(N-2k) primitive after k links for N = 6, 7 and k = 1, 2", failures)


def test_criterion_13_reparameterization():
    rng = random.Random(13)
    failures = []
    for N in (4, 5, 7):
        rep = defining_rep(build_sl(N))
        for _ in range(POINTS):
            nu, rho = random_rationals(rng, z_max(N)), random_rationals(rng, n_half(N) - 1)
            psi, zeta = nu_rho_to_psi_zeta(nu, rho)
            a = enlarged_chain_J(N, nu=nu, rho=rho)
            b = enlarged_chain_J(N, psi, zeta)
            if not HV.operators_equal(a, b, rep).passed:
                failures.append(f"sl({N}) nu={nu} rho={rho}")
    _verdict(13, "nu_rho and psi_zeta enlarged chains coincide at 3 points (N = 4, 5, 7)",
             failures)
