import pytest
from gmpy2 import mpq

from twistchain import hopfverify as HV
from twistchain.liealg import E, H, build_L, build_sl
from twistchain.tensorexpr import Exp, Gen, Prod, build_adjoint_rep, defining_rep, sigma
from twistchain.twistlib import (enlarged_chain_J, jordanian, pet, peripheric_chain,
                                 random_rationals)

TABLES = {
    "delta_pb": (HV.delta_pb_table, lambda: peripheric_chain(4)),
    "delta_jb": (HV.delta_jb_table, lambda: enlarged_chain_J(4, [1, 1], [1])),
}


def _reps(g):
    return [defining_rep(g), build_adjoint_rep(g)]


def test_pet_table_literal():
    L, rows = HV.pet_table()
    for rep in _reps(L):
        assert HV.check_coproduct_table(pet(), rows, rep).passed


@pytest.mark.parametrize("table", sorted(TABLES))
def test_corrected_tables_exact_in_both_reps(table):
    build, chain = TABLES[table]
    g, rows = build()
    assert len(rows) == 9
    for rep in _reps(g):
        assert HV.check_coproduct_table(chain(), rows, rep).passed


@pytest.mark.parametrize("table", sorted(TABLES))
def test_printed_rows_fail_exactly_where_listed(table):
    build, chain = TABLES[table]
    g, rows = build(printed=True)
    report = HV.check_coproduct_table(chain(), rows, defining_rep(g))
    failing = {label for label, s in report.detail["rows"].items() if s}
    assert failing == set(HV.MISPRINTS[table])


def test_drinfeld_negative_control():
    """exp(H (x) E) is not a twist: the residual is visible."""
    g = build_sl(2)
    F = Exp(Prod((Gen(g.element(H(1, 2)), 1), Gen(g.element(E(1, 2)), 2))))
    report = HV.check_drinfeld(F, defining_rep(g))
    assert not report.passed and report.residual_support > 0


@pytest.mark.parametrize("N", [3, 4])
def test_hexagon(N, rng):
    F = peripheric_chain(N, random_rationals(rng, N // 2))
    assert HV.check_hexagon(F, defining_rep(build_sl(N))).passed


def test_jordanian_r_matrix_qybe():
    g = build_sl(2)
    F = jordanian(g.element(H(1, 2)), g.element(E(1, 2)), mpq(3, 5))
    for rep in _reps(g):
        assert HV.check_qybe(HV.r_matrix(F, rep)).passed


@pytest.mark.parametrize("N, k", [(6, 1), (6, 2), (7, 1), (7, 2), (7, 3)])
def test_matreshka(N, k):
    assert HV.check_matreshka(N, k).passed


def test_matreshka_is_sharp():
    """The link's own root vector is not primitive after the link."""
    g = build_sl(4)
    F = peripheric_chain(4, [1])
    assert not HV.check_primitive(F, g.element(E(1, 4)), defining_rep(g)).passed


def test_coassociativity_on_chevalley_generators():
    F = peripheric_chain(5)
    rep = defining_rep(build_sl(5))
    report = HV.check_coassociativity_all(F, HV.chevalley_generators(5), rep)
    assert report.passed and len(report.detail["rows"]) == 12


def test_pet_coproducts_on_L10():
    L = build_L(1, 0)
    rep = defining_rep(L)
    A = L.element("A")
    assert HV.check_primitive(pet(mpq(2)), A, rep).passed
    assert HV.check_coassociativity(pet(mpq(2)), L.element("H"), rep).passed


def test_operator_dump_helpers():
    g = build_sl(2)
    F = Exp(Prod((Gen(g.element(H(1, 2)), 1), sigma(g.element(E(1, 2)), 2))))
    op = HV.r_matrix(F, defining_rep(g))
    assert op.legs == 2 and op.matrix.n == 4
