import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gammaloop.constructions import (bruck_from_gamma, bruck_from_group, check_gamma_ldiv_formula,
                                     check_midpoint_uniqueness, check_moufang_collapse,
                                     check_square_p_operator, gamma_from_bruck,
                                     gamma_from_bruck_via_translations, gamma_from_group,
                                     powers_coincide, round_trip_report)
from gammaloop.errors import PreconditionError
from gammaloop.groups import cyclic
from gammaloop.table import CayleyTable, first_associativity_failure
from gammaloop.varieties import check_bol_bruck, check_gamma

M, K, R = 7, 3, 2
ELEMS = [(a, s) for a in range(M) for s in range(K)]
INDEX = {e: i for i, e in enumerate(ELEMS)}


def mul(x, y):
    (a, s), (b, t) = x, y
    return ((a + pow(R, s, M) * b) % M, (s + t) % K)


def inv(x):
    for y in ELEMS:
        if mul(x, y) == (0, 0):
            return y


def sqrt(x):
    order, y = 1, x
    while y != (0, 0):
        y, order = mul(y, x), order + 1
    y = (0, 0)
    for _ in range((order + 1) // 2):
        y = mul(y, x)
    return y


def oracle_tables():
    n = len(ELEMS)
    gamma = np.zeros((n, n), dtype=int)
    bruck = np.zeros((n, n), dtype=int)
    for x in ELEMS:
        for y in ELEMS:
            comm = mul(mul(inv(y), inv(x)), mul(y, x))       # [y, x]
            gamma[INDEX[x], INDEX[y]] = INDEX[mul(mul(x, y), sqrt(comm))]
            bruck[INDEX[x], INDEX[y]] = INDEX[sqrt(mul(mul(x, mul(y, y)), x))]
    return gamma, bruck


@pytest.fixture(scope="module")
def oracle():
    return oracle_tables()


def test_gamma_matches_pointwise_oracle(g21, oracle):
    assert np.array_equal(gamma_from_group(g21).table.table, oracle[0])


def test_bruck_matches_pointwise_oracle(g21, oracle):
    assert np.array_equal(bruck_from_group(g21).table.table, oracle[1])


def test_gamma21_is_commutative_nonassociative(gamma21):
    assert np.array_equal(gamma21.table, gamma21.table.T)
    assert first_associativity_failure(gamma21) is not None


def test_abelian_input_unchanged():
    g = cyclic(15)
    for fn in (gamma_from_group, bruck_from_group):
        assert fn(g).table == g
    assert bruck_from_gamma(g).table == g
    assert gamma_from_bruck(g).table == g
    assert gamma_from_bruck_via_translations(g).table == g


def test_verify_flag_records_checks(g21):
    assert gamma_from_group(g21, verify=True).checks == {"loop": True, "gamma": True}
    assert bruck_from_group(g21, verify=True).checks == {"loop": True, "bruck": True}


def test_even_order_rejected():
    with pytest.raises(PreconditionError, match="even order"):
        gamma_from_group(cyclic(4))
    with pytest.raises(PreconditionError):
        bruck_from_group(cyclic(6))


def test_non_group_rejected(gamma21):
    with pytest.raises(PreconditionError):
        gamma_from_group(gamma21)


def test_bruck_from_gamma_rejects_non_gamma(bruck21):
    with pytest.raises(PreconditionError, match="Γ-loop"):
        bruck_from_gamma(bruck21)


def test_gamma_from_bruck_rejects_non_bruck(gamma21):
    with pytest.raises(PreconditionError, match="Bruck"):
        gamma_from_bruck(gamma21)


def test_bruck_identity_row(gamma21):
    b = bruck_from_gamma(gamma21).table
    assert b.table[0].tolist() == list(range(21))


def test_both_routes_to_bruck_agree(corpus, gammas, brucks):
    for name in corpus:
        assert bruck_from_gamma(gammas[name]).table == brucks[name], name


def test_bruck_to_gamma_recovers_group_gamma(corpus, gammas, brucks):
    for name in corpus:
        assert gamma_from_bruck(brucks[name]).table == gammas[name], name


@pytest.mark.parametrize("name", ["C9", "C7:C3", "heis3"])
def test_translation_route_agrees(brucks, name):
    via = gamma_from_bruck_via_translations(brucks[name])
    assert via.table == gamma_from_bruck(brucks[name]).table
    assert via.checks["mlt_left_order"] % 2 == 1


def test_translation_route_cap(bruck21):
    from gammaloop.errors import ClosureIncomplete
    with pytest.raises(ClosureIncomplete):
        gamma_from_bruck_via_translations(bruck21, cap=10)


def test_round_trip_c9():
    assert round_trip_report(cyclic(9), "gamma").passed
    assert round_trip_report(cyclic(9), "bruck").passed


def test_round_trip_reports_stage(bruck21):
    rep = round_trip_report(bruck21, "gamma")
    assert rep.status == "error"
    assert rep.details["stage"] == "bruck_from_gamma"


def test_round_trip_unknown_kind():
    with pytest.raises(ValueError):
        round_trip_report(cyclic(3), "moufang")


@pytest.mark.parametrize("name", ["C9", "C7:C3", "heis3", "heis5"])
def test_construction_invariants(corpus, gammas, brucks, name):
    assert powers_coincide(corpus[name]).passed
    assert check_square_p_operator(gammas[name]).passed
    assert check_midpoint_uniqueness(brucks[name]).passed
    assert check_gamma_ldiv_formula(corpus[name]).passed


def test_midpoint_solution_set_by_brute_force(bruck21, gamma21):
    B = bruck21
    root = B.squares.inverse
    for x in range(21):
        for y in range(21):
            sols = [z for z in range(21)
                    if B.mul(x, B.inverses[root[z]]) == B.mul(B.inverses[y], root[z])]
            assert sols == [gamma21.mul(x, y)]


def test_moufang_collapse_on_abelian(corpus, gammas):
    assert check_moufang_collapse(corpus["C3xC3"]).passed
    assert check_moufang_collapse(gammas["heis5"]).passed
    assert check_moufang_collapse(gammas["C7:C3"]).status == "error"


@settings(max_examples=15, deadline=None)
@given(st.permutations(list(range(1, 21))))
def test_constructions_commute_with_relabelling(g21, perm):
    p = np.array([0] + list(perm))
    r = g21.relabel(p)
    assert gamma_from_group(r).table == gamma_from_group(g21).table.relabel(p)
    assert bruck_from_group(r).table == bruck_from_group(g21).table.relabel(p)


@settings(max_examples=15, deadline=None)
@given(st.permutations(list(range(1, 21))))
def test_outputs_pass_variety_checks_after_relabelling(gamma21, perm):
    q = gamma21.relabel(np.array([0] + list(perm)))
    assert check_gamma(q).passed
    assert check_bol_bruck(bruck_from_gamma(q).table, "bruck").passed
    assert round_trip_report(q, "gamma").passed
