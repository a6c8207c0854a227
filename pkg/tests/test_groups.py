import itertools

import numpy as np
import pytest

from gammaloop.errors import LoopInputError, PreconditionError
from gammaloop.groups import (G375_MATRIX, GroupSpec, build_group, cyclic, cyclic_semidirect,
                              group_sqrt, group_sqrt_array, heisenberg, heisenberg_automorphism,
                              is_metabelian, semidirect_product)
from gammaloop.table import first_associativity_failure, is_isomorphic, validate_loop


def matrix_heisenberg(p):
    """Oracle: multiply explicit 3x3 unitriangular matrices."""
    elems = []
    for a, b, c in itertools.product(range(p), repeat=3):
        elems.append(np.array([[1, a, c], [0, 1, b], [0, 0, 1]]))
    key = {m.tobytes(): i for i, m in enumerate(elems)}
    n = len(elems)
    T = np.zeros((n, n), dtype=int)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            T[i, j] = key[((x @ y) % p).tobytes()]
    return T


def pair_semidirect(m, k, r):
    """Oracle: (a, s)(b, t) = (a + r^s b, s + t) on explicit pairs."""
    elems = [(a, s) for a in range(m) for s in range(k)]
    idx = {e: i for i, e in enumerate(elems)}
    T = np.zeros((m * k, m * k), dtype=int)
    for (a, s), (b, t) in itertools.product(elems, repeat=2):
        T[idx[(a, s)], idx[(b, t)]] = idx[((a + pow(r, s, m) * b) % m, (s + t) % k)]
    return T


@pytest.mark.parametrize("p", [3, 5])
def test_heisenberg_matches_matrix_product(p):
    assert np.array_equal(heisenberg(p).table, matrix_heisenberg(p))


def test_semidirect_matches_pairs():
    assert np.array_equal(cyclic_semidirect(7, 3, 2).table, pair_semidirect(7, 3, 2))


def test_semidirect_rejects_wrong_order_action():
    with pytest.raises(LoopInputError):
        cyclic_semidirect(7, 3, 3)


def test_semidirect_names_failing_pair():
    bad = np.array([np.arange(5), (np.arange(5) + 1) % 5])
    with pytest.raises(LoopInputError, match="pair"):
        semidirect_product(cyclic(5), cyclic(2), bad)


@pytest.mark.parametrize("name", ["C3", "C5", "C7", "C9", "C15", "C3xC3", "C7:C3", "heis3", "heis5"])
def test_corpus_are_groups(corpus, name):
    g = corpus[name]
    assert validate_loop(g).passed
    assert first_associativity_failure(g) is None
    assert g.n % 2 == 1


def test_g375_shape(corpus):
    g = corpus["g375"]
    assert g.n == 375
    assert set(g.order_profile.orders) == {1, 3, 5, 15}
    assert g.order_profile.exponent == 15
    rep = is_metabelian(g)
    assert not rep.passed
    assert rep.details["derived_order"] == 125


def test_g375_associative(corpus):
    assert first_associativity_failure(corpus["g375"]) is None


def test_automorphism_lift_is_automorphism_of_order_3():
    H = heisenberg(5).table
    alpha = heisenberg_automorphism(5, G375_MATRIX)
    assert np.array_equal(alpha[H], H[alpha[:, None], alpha[None, :]])
    assert np.array_equal(alpha[alpha[alpha]], np.arange(125))
    assert not np.array_equal(alpha, np.arange(125))


def test_lift_rejects_bad_determinant():
    with pytest.raises(LoopInputError):
        heisenberg_automorphism(5, ((2, 0), (0, 1)))


def test_metabelian_small_groups(corpus):
    assert is_metabelian(corpus["C7:C3"]).details["derived_order"] == 7
    assert is_metabelian(corpus["heis3"]).passed
    assert is_metabelian(corpus["C15"]).details["derived_order"] == 1


def test_sqrt_squares_back(corpus):
    for name, g in corpus.items():
        r = group_sqrt_array(g)
        assert np.array_equal(g.table[r, r], np.arange(g.n)), name


def test_sqrt_single_element():
    g = cyclic(9)
    assert group_sqrt(g, 2) == 1


def test_even_order_sqrt_names_element():
    with pytest.raises(PreconditionError, match="element 1 has even order 6"):
        group_sqrt_array(cyclic(6))


def test_build_group_specs():
    assert build_group(GroupSpec("cyclic", (7,))).n == 7
    assert build_group(GroupSpec("abelian", (3, 5))).n == 15
    assert is_isomorphic(build_group(GroupSpec("semidirect", (7, 3, 2))), cyclic_semidirect(7, 3, 2))
    with pytest.raises(LoopInputError):
        build_group(GroupSpec("cyclic", (3, 3)))
    with pytest.raises(LoopInputError):
        build_group(GroupSpec("dihedral", (3,)))
    assert GroupSpec("g375").name() == "g375"
