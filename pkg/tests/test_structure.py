import itertools

import numpy as np
import pytest
from sympy.combinatorics import Permutation as SymPerm, PermutationGroup

from gammaloop.errors import PreconditionError
from gammaloop.experiments import EXAMPLE_6
from gammaloop.groups import abelian, cyclic
from gammaloop.perm import left_translations
from gammaloop.search import SearchSpec, search_loops
from gammaloop.structure import (center, center_transfer_check, derived_series, derived_subloop,
                                 enumerate_subloops, hall_subloop, is_normal, is_subloop,
                                 lagrange_cauchy_audit, normal_closure, quotient, quotient_map,
                                 subloop_generate, sylow_subloop, upper_central_series)
from gammaloop.table import first_associativity_failure, is_isomorphic


def brute_subloops(t):
    n = t.n
    out = set()
    for bits in range(1 << (n - 1)):
        S = [0] + [i for i in range(1, n) if bits >> (i - 1) & 1]
        s = set(S)
        if all(t.mul(a, b) in s and t.ldiv(a, b) in s and t.rdiv(a, b) in s for a in S for b in S):
            out.add(tuple(S))
    return out


def brute_center(t):
    n = t.n
    Z = []
    for a in range(n):
        if any(t.mul(a, x) != t.mul(x, a) for x in range(n)):
            continue
        ok = True
        for x, y in itertools.product(range(n), repeat=2):
            if (t.mul(t.mul(a, x), y) != t.mul(a, t.mul(x, y))
                    or t.mul(t.mul(x, a), y) != t.mul(x, t.mul(a, y))
                    or t.mul(t.mul(x, y), a) != t.mul(x, t.mul(y, a))):
                ok = False
                break
        if ok:
            Z.append(a)
    return tuple(Z)


@pytest.fixture(scope="module")
def small_loops():
    loops = [EXAMPLE_6, cyclic(9), abelian([3, 3])]
    loops += search_loops(SearchSpec(6, commutative=True, max_solutions=10)).solutions
    loops += search_loops(SearchSpec(7, max_solutions=5)).solutions
    return loops


def test_enumeration_matches_all_subsets(small_loops):
    for t in small_loops:
        enum = enumerate_subloops(t)
        assert enum.complete
        assert {h.elements for h in enum} == brute_subloops(t)


def test_enumeration_gamma21(gamma21):
    enum = enumerate_subloops(gamma21)
    assert enum.complete and len(enum) == 10
    assert enum.orders == [1, 3, 7, 21]
    assert all(is_subloop(gamma21, h.elements) for h in enum)


def test_center_matches_definition(small_loops, gamma21, bruck21):
    for t in small_loops + [gamma21, bruck21]:
        assert center(t).elements == brute_center(t)


@pytest.mark.parametrize("name,order", [("heis3", 3), ("heis5", 5), ("C7:C3", 1), ("C15", 15)])
def test_group_center_matches_sympy(corpus, name, order):
    g = corpus[name]
    sym = PermutationGroup([SymPerm(list(p.images)) for p in left_translations(g)])
    assert center(g).order == sym.center().order() == order


def test_upper_central_series(corpus, gammas, gamma21):
    assert upper_central_series(corpus["heis3"]).orders == [1, 3, 27]
    assert upper_central_series(corpus["heis5"]).orders == [1, 5, 125]
    assert upper_central_series(gammas["heis3"]).orders == [1, 27]
    rec = upper_central_series(gamma21)
    assert rec.orders == [1] and not rec.terminates


def test_normality(g21):
    sylow3 = subloop_generate(g21, [1])
    assert sylow3.order == 3
    assert not is_normal(g21, sylow3).passed
    assert is_normal(g21, subloop_generate(g21, [3])).passed


def test_quotient_is_homomorphic_image():
    q, block = quotient_map(cyclic(9), [0, 3, 6])
    assert is_isomorphic(q, cyclic(3)) is not None
    T = cyclic(9).table
    for x, y in itertools.product(range(9), repeat=2):
        assert block[T[x, y]] == q.mul(block[x], block[y])


def test_quotient_rejects_non_normal(g21):
    with pytest.raises(PreconditionError):
        quotient(g21, subloop_generate(g21, [1]))


def test_normal_closure_of_generator(g21):
    assert len(normal_closure(g21, [1])) == 21


def test_derived_routes_agree(small_loops, gamma21, gammas):
    for t in small_loops + [gamma21, gammas["heis3"]]:
        a, _ = derived_subloop(t, "closure")
        b, _ = derived_subloop(t, "lattice")
        assert np.array_equal(np.sort(a), np.sort(b))


def test_derived_series_gamma21(gamma21):
    for method in ("closure", "lattice"):
        rec = derived_series(gamma21, method)
        assert rec.orders == [21, 7, 1]
        assert rec.terminates


def test_derived_of_abelian_group_is_trivial():
    assert derived_series(cyclic(15)).orders == [15, 1]


def test_sylow_and_hall_gamma21(gamma21):
    assert sylow_subloop(gamma21, 3).order == 3
    assert sylow_subloop(gamma21, 7).order == 7
    assert hall_subloop(gamma21, [3, 7]).order == 21


def test_sylow_of_heis5_gamma(gammas):
    h = sylow_subloop(gammas["heis5"], 5)
    assert h.order == 125


def test_lagrange_cauchy(gamma21):
    assert lagrange_cauchy_audit(gamma21).passed


def test_cauchy_fails_at_even_order():
    # the order-6 Γ-loop has only involutions
    rep = lagrange_cauchy_audit(EXAMPLE_6)
    assert not rep.passed
    assert rep.details["violation"] == "cauchy" and rep.details["prime"] == 3


def test_center_transfer(bruck21, brucks):
    assert center_transfer_check(bruck21).passed
    rep = center_transfer_check(brucks["heis3"])
    assert rep.passed and rep.details["bruck_center"] == 27
