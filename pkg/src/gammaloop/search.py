"""Exhaustive loop search by Latin-square completion.

Cells are filled row-major with the identity row and column pinned.  After
every assignment each identity is evaluated on all variable assignments
against the partial tables; an instance counts only when every subterm is
defined, and a defined mismatch prunes the branch.  Undefined cells hold
``-1`` and the tables carry an extra all ``-1`` row and column so undefined
values propagate through indexing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .report import Report
from .table import CayleyTable, first_associativity_failure, is_isomorphic
from .terms import Identity, Term, identity_variables, parse_identity
from .varieties import AIP, BOL, GAMMA3, GAMMA4

GAMMA_IDENTITIES = (AIP, GAMMA3, GAMMA4)
BRUCK_IDENTITIES = (BOL, AIP)


@dataclass
class SearchSpec:
    order: int
    identities: Sequence[Identity | str] = ()
    commutative: bool = False
    up_to_iso: bool = False
    max_solutions: int | None = None
    node_budget: int | None = None
    budget_ms: int | None = None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be at least 1")
        self.identities = [parse_identity(i) if isinstance(i, str) else i for i in self.identities]


@dataclass
class SearchResult:
    solutions: list[CayleyTable]
    complete: bool
    nodes: int
    raw_count: int
    elapsed: float = 0.0
    stop_reason: str | None = None

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


def _compile(term: Term, index: dict[str, int]) -> Callable:
    if term.kind == "var":
        k = index[term.name]
        return lambda tabs, env: env[k]
    if term.kind == "e":
        return lambda tabs, env: 0
    slot = {"*": 0, "\\": 1, "/": 2}[term.kind]
    left, right = _compile(term.left, index), _compile(term.right, index)
    return lambda tabs, env: tabs[slot][left(tabs, env), right(tabs, env)]


class _Checker:
    """One identity, evaluated over all ``n^k`` instances at once."""

    def __init__(self, identity: Identity, n: int):
        names = identity_variables(identity)
        index = {nm: i for i, nm in enumerate(names)}
        self.lhs = _compile(identity[0], index)
        self.rhs = _compile(identity[1], index)
        grids = np.meshgrid(*[np.arange(n)] * len(names), indexing="ij")
        self.env = [g.ravel() for g in grids]

    def violated(self, tabs) -> bool:
        a = np.asarray(self.lhs(tabs, self.env))
        b = np.asarray(self.rhs(tabs, self.env))
        return bool(((a >= 0) & (b >= 0) & (a != b)).any())


def _cells(n: int, commutative: bool) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n) for j in range(i if commutative else 1, n)]


def search_loops(spec: SearchSpec) -> SearchResult:
    """Enumerate loops on ``0..n-1`` with identity 0 satisfying ``spec``.

    Solutions come out in lexicographic order of the flattened table.  In
    up-to-isomorphism mode the first (hence least) member of each class is kept.
    Hitting a node or wall budget, or the solution cap, clears ``complete``.
    """
    n = spec.order
    t0 = time.perf_counter()
    deadline = None if spec.budget_ms is None else t0 + spec.budget_ms / 1000.0

    mul = np.full((n + 1, n + 1), -1, dtype=np.intp)
    ld = np.full((n + 1, n + 1), -1, dtype=np.intp)
    rd = np.full((n + 1, n + 1), -1, dtype=np.intp)
    tabs = (mul, ld, rd)
    full = (1 << n) - 1
    row_used = [0] * n
    col_used = [0] * n

    def put(i, j, v):
        mul[i, j] = v
        ld[i, v] = j
        rd[v, j] = i
        row_used[i] |= 1 << v
        col_used[j] |= 1 << v

    def clear(i, j, v):
        mul[i, j] = -1
        ld[i, v] = -1
        rd[v, j] = -1
        row_used[i] &= ~(1 << v)
        col_used[j] &= ~(1 << v)

    for k in range(n):
        put(0, k, k)
        if k:
            put(k, 0, k)

    checkers = [_Checker(ident, n) for ident in spec.identities]
    cells = _cells(n, spec.commutative)
    raw: list[CayleyTable] = []
    kept: list[CayleyTable] = []
    state = {"nodes": 0, "stop": None}

    def consistent() -> bool:
        return not any(c.violated(tabs) for c in checkers)

    def record():
        t = CayleyTable(mul[:n, :n].copy())
        raw.append(t)
        if spec.up_to_iso:
            if any(is_isomorphic(t, s) is not None for s in kept):
                return
        kept.append(t)
        if spec.max_solutions is not None and len(kept) >= spec.max_solutions:
            state["stop"] = "max-solutions"

    def go(pos: int):
        if state["stop"]:
            return
        if pos == len(cells):
            record()
            return
        i, j = cells[pos]
        mirror = spec.commutative and i != j
        used = row_used[i] | col_used[j]
        if mirror:
            used |= row_used[j] | col_used[i]
        free = full & ~used
        v = 0
        while free:
            if not free & 1:
                free >>= 1
                v += 1
                continue
            state["nodes"] += 1
            if spec.node_budget is not None and state["nodes"] > spec.node_budget:
                state["stop"] = "node-budget"
                return
            if deadline is not None and time.perf_counter() > deadline:
                state["stop"] = "wall-budget"
                return
            put(i, j, v)
            if mirror:
                put(j, i, v)
            if consistent():
                go(pos + 1)
            if mirror:
                clear(j, i, v)
            clear(i, j, v)
            if state["stop"]:
                return
            free >>= 1
            v += 1

    if consistent():
        go(0)
    return SearchResult(kept, state["stop"] is None, state["nodes"], len(raw),
                        time.perf_counter() - t0, state["stop"])


def search_gamma(n: int, **kw) -> SearchResult:
    """Γ-loops of order ``n``: commutativity structural, the rest as identities."""
    return search_loops(SearchSpec(n, GAMMA_IDENTITIES, commutative=True, **kw))


@dataclass
class BruckSearchReport:
    counts: dict[int, int] = field(default_factory=dict)
    complete: dict[int, bool] = field(default_factory=dict)
    nonassociative: dict[int, list[CayleyTable]] = field(default_factory=dict)
    followups: list[Report] = field(default_factory=list)

    def report(self) -> Report:
        details = {}
        for n in self.counts:
            details[f"order{n}_classes"] = self.counts[n]
            details[f"order{n}_complete"] = self.complete[n]
            details[f"order{n}_nonassociative"] = len(self.nonassociative[n])
        passed = all(r.passed for r in self.followups)
        return Report("bruck-search", passed, details=details)


def search_bruck_odd(orders: Sequence[int], budget_ms: int | None = None) -> BruckSearchReport:
    """Search Bol + AIP loops at odd orders and run follow-up checks on the finds.

    Nonassociative finds go through both round trips and the center transfer
    check.  Order ``p²`` finds must have an associative Γ-image.
    """
    from sympy import factorint

    from .constructions import gamma_from_bruck, round_trip_report
    from .structure import center_transfer_check

    out = BruckSearchReport()
    for n in orders:
        if n % 2 == 0:
            raise ValueError(f"order {n} is even")
        res = search_loops(SearchSpec(n, BRUCK_IDENTITIES, up_to_iso=True, budget_ms=budget_ms))
        out.counts[n] = len(res)
        out.complete[n] = res.complete
        out.nonassociative[n] = [t for t in res if first_associativity_failure(t) is not None]
        f = factorint(n)
        for t in res:
            if len(f) == 1 and sum(f.values()) == 2:
                g = gamma_from_bruck(t).table
                out.followups.append(Report(f"p2-gamma-associative(n={n})",
                                            first_associativity_failure(g) is None))
        for t in out.nonassociative[n]:
            out.followups.append(round_trip_report(t, "bruck"))
            out.followups.append(round_trip_report(gamma_from_bruck(t).table, "gamma"))
            out.followups.append(center_transfer_check(t))
    return out
