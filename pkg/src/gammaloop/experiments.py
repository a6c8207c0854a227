"""Named experiment bundles run by ``gammaloop experiment <name>``."""

from __future__ import annotations

import time
from functools import lru_cache
from typing import Callable

import numpy as np

from .constructions import bruck_from_gamma, bruck_from_group, gamma_from_group, round_trip_report
from .groups import corpus, g375, is_metabelian
from .perm import is_twisted_subset
from .report import Report
from .structure import SubloopHandle, find_subloop_of_order, hall_subloop, sylow_subloop
from .table import CayleyTable, first_associativity_failure
from .varieties import check_automorphic, check_gamma

# smallest Γ-loop that is not commutative automorphic
EXAMPLE_6 = CayleyTable([
    [0, 1, 2, 3, 4, 5],
    [1, 0, 3, 5, 2, 4],
    [2, 3, 0, 4, 5, 1],
    [3, 5, 4, 0, 1, 2],
    [4, 2, 5, 1, 0, 3],
    [5, 4, 1, 2, 3, 0],
])


def example_six() -> Report:
    gamma = check_gamma(EXAMPLE_6)
    auto = check_automorphic(EXAMPLE_6)
    details = {"gamma": gamma.status, "automorphic": auto.status,
               "associative": first_associativity_failure(EXAMPLE_6) is None}
    if auto.witness:
        details["automorphic_witness"] = auto.witness
    return Report("example-2.8", gamma.passed and not auto.passed, details=details)


def baer_trick() -> Report:
    """Class at most 2: the Γ-loop is an abelian group and equals the Bruck loop."""
    names = ["C3", "C5", "C7", "C9", "C15", "C3xC3", "heis3", "heis5"]
    groups = corpus()
    details = {}
    ok = True
    for name in names:
        gamma = gamma_from_group(groups[name]).table
        bruck = bruck_from_group(groups[name]).table
        good = (first_associativity_failure(gamma) is None
                and bool(np.array_equal(gamma.table, gamma.table.T))
                and gamma == bruck)
        details[name] = good
        ok &= good
    return Report("baer-trick", ok, details=details)


def conjugacy_representatives(g: CayleyTable) -> list[int]:
    """Least element of each conjugacy class of the group ``g``."""
    T, inv = g.table, g.inverses
    seen = np.zeros(g.n, dtype=bool)
    reps = []
    idx = np.arange(g.n)
    for x in range(g.n):
        if seen[x]:
            continue
        reps.append(x)
        seen[T[T[idx, x], inv]] = True       # g x g⁻¹ over all g
    return reps


@lru_cache(maxsize=1)
def g375_order75() -> tuple[CayleyTable, CayleyTable, SubloopHandle | None]:
    """Group, its Γ-loop and an order-75 subloop of the Γ-loop (or ``None``).

    Conjugation is an automorphism of the Γ-loop, so the first generator can
    range over conjugacy class representatives only.
    """
    g = g375()
    gamma = gamma_from_group(g).table
    sub = find_subloop_of_order(gamma, 75, first=conjugacy_representatives(g))
    return g, gamma, sub


def g375_experiment() -> Report:
    t0 = time.perf_counter()
    g, gamma, sub = g375_order75()
    details: dict = {"order": g.n, "metabelian": is_metabelian(g).passed,
                     "gamma": check_gamma(gamma).status,
                     "samebruck": bruck_from_gamma(gamma).table == bruck_from_group(g).table}
    ok = g.n == 375 and not details["metabelian"] and details["gamma"] == "pass" and details["samebruck"]
    if sub is None:
        details["subloop75"] = "not-found"
        details["elapsed"] = round(time.perf_counter() - t0, 1)
        return Report("g375", False, details=details)
    h = gamma.restrict(sub.elements)
    twisted = is_twisted_subset(g, sub.elements)
    auto = check_automorphic(h)
    details.update({"subloop75": "found", "generators": list(sub.generators),
                    "twisted": twisted.status, "automorphic": auto.status,
                    "sylow3": sylow_subloop(h, 3).order, "hall5": hall_subloop(h, [5]).order,
                    "elapsed": round(time.perf_counter() - t0, 1)})
    ok &= twisted.passed and not auto.passed
    return Report("g375", ok, details=details)


def roundtrip_corpus() -> Report:
    details = {}
    ok = True
    for name, g in corpus().items():
        gamma = gamma_from_group(g).table
        bruck = bruck_from_group(g).table
        for kind, q in (("gamma", gamma), ("bruck", bruck)):
            rep = round_trip_report(q, kind)
            details[f"{name}.{kind}"] = rep.status
            ok &= rep.passed
    return Report("roundtrip-corpus", ok, details=details)


def sylow_hall() -> Report:
    gamma21 = gamma_from_group(corpus()["C7:C3"]).table
    details = {"g21.sylow3": sylow_subloop(gamma21, 3).order,
               "g21.sylow7": sylow_subloop(gamma21, 7).order}
    ok = details["g21.sylow3"] == 3 and details["g21.sylow7"] == 7
    _, gamma, sub = g375_order75()
    if sub is not None:
        h = gamma.restrict(sub.elements)
        details["q75.sylow3"] = sylow_subloop(h, 3).order
        details["q75.hall5"] = hall_subloop(h, [5]).order
        ok &= details["q75.sylow3"] == 3 and details["q75.hall5"] == 25
    return Report("sylow-hall", ok, details=details)


def metabelian_question() -> Report:
    """Is the Γ-loop of a metabelian group commutative automorphic?  Report only."""
    details = {}
    for name, g in corpus().items():
        if name == "g375" or not is_metabelian(g).passed:
            continue
        details[name] = check_automorphic(gamma_from_group(g).table).status
    return Report("metabelian-conjecture", True, details=details)


EXPERIMENTS: dict[str, Callable[[], Report]] = {
    "example-2.8": example_six,
    "baer-trick": baer_trick,
    "g375": g375_experiment,
    "roundtrip-corpus": roundtrip_corpus,
    "sylow-hall": sylow_hall,
    "metabelian-conjecture": metabelian_question,
}
