"""Subloops, normality, quotients, centers, central and derived series,
and Sylow/Hall subloop search."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
import sympy

from .errors import ConsistencyError, PreconditionError
from .perm import inner_mapping_blocks
from .report import Report
from .table import CayleyTable, first_associativity_failure, generated_subloop

DEFAULT_SUBLOOP_CAP = 20_000
SYLOW_BUDGET = 1_000_000


@dataclass(frozen=True)
class SubloopHandle:
    elements: tuple[int, ...]
    generators: tuple[int, ...] = ()
    normal: bool | None = None
    prime: int | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    @property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[list(self.elements)] = True
        return m

    def issubset(self, other: SubloopHandle) -> bool:
        return self._set <= other._set


@dataclass
class SeriesRecord:
    """Ascending (upper central) or descending (derived) chain of subloops."""

    kind: str
    terms: list[SubloopHandle]
    terminates: bool
    length: int
    reliable: bool = True

    @property
    def orders(self) -> list[int]:
        return [h.order for h in self.terms]


@dataclass
class SubloopEnumeration:
    subloops: list[SubloopHandle]
    complete: bool

    def __iter__(self):
        return iter(self.subloops)

    def __len__(self) -> int:
        return len(self.subloops)

    @property
    def orders(self) -> list[int]:
        return sorted({h.order for h in self.subloops})


def _handle(S: np.ndarray | Iterable[int], gens: Sequence[int] = ()) -> SubloopHandle:
    return SubloopHandle(tuple(int(s) for s in sorted(S)), tuple(int(g) for g in gens))


def subloop_generate(t: CayleyTable, seed: Iterable[int]) -> SubloopHandle:
    seed = [int(s) for s in seed]
    return _handle(generated_subloop(t, seed), seed)


def is_subloop(t: CayleyTable, elements: Iterable[int]) -> bool:
    S = np.array(sorted(set(int(e) for e in elements)), dtype=np.intp)
    if len(S) == 0 or S[0] != 0:
        return False
    mask = np.zeros(t.n, dtype=bool)
    mask[S] = True
    grid = (S[:, None], S[None, :])
    return all(mask[op[grid]].all() for op in (t.table, t.ldiv_table, t.rdiv_table))


def enumerate_subloops(t: CayleyTable, cap: int = DEFAULT_SUBLOOP_CAP) -> SubloopEnumeration:
    """Closures of all subsets of size at most two, then joins to a fixpoint.

    ``complete`` is false if more than ``cap`` subloops turn up.
    """
    t.require_loop()
    n = t.n
    found: dict[tuple[int, ...], SubloopHandle] = {}

    def add(S: np.ndarray, gens: Sequence[int]) -> bool:
        key = tuple(int(s) for s in S)
        if key in found:
            return False
        found[key] = SubloopHandle(key, tuple(gens))
        return True

    cyclic = [generated_subloop(t, [x]) for x in range(n)]
    cyc_mask = [np.isin(np.arange(n), c) for c in cyclic]
    for x in range(n):
        add(cyclic[x], (x,) if x else ())
    for x, y in combinations(range(1, n), 2):
        if cyc_mask[x][y] or cyc_mask[y][x]:
            continue
        add(generated_subloop(t, [x, y]), (x, y))
        if len(found) > cap:
            return SubloopEnumeration(sorted(found.values(), key=_sort_key), False)
    # join closure
    frontier = list(found.values())
    while frontier:
        current = list(found.values())
        new = []
        for a in frontier:
            am = a.mask(n)
            for b in current:
                if am[list(b.elements)].all():
                    continue
                if set(a.elements) <= set(b.elements):
                    continue
                S = generated_subloop(t, a.elements + b.elements)
                if add(S, a.generators + b.generators):
                    new.append(found[tuple(int(s) for s in S)])
                    if len(found) > cap:
                        return SubloopEnumeration(sorted(found.values(), key=_sort_key), False)
        frontier = new
    return SubloopEnumeration(sorted(found.values(), key=_sort_key), True)


def _sort_key(h: SubloopHandle):
    return (h.order, h.elements)


def normality_witness(t: CayleyTable, elements: Iterable[int]) -> str | None:
    """Name of the first inner-mapping generator moving the subset, or None."""
    H = np.array(sorted(set(int(e) for e in elements)), dtype=np.intp)
    mask = np.zeros(t.n, dtype=bool)
    mask[H] = True
    for family, x, arr in inner_mapping_blocks(t):
        bad = ~mask[arr[:, H]].all(axis=1)
        if bad.any():
            row = int(np.argmax(bad))
            return f"T({row})" if family == "T" else f"{family}({x},{row})"
    return None


def is_normal(t: CayleyTable, h: SubloopHandle | Iterable[int]) -> Report:
    """Invariance under every standard inner-mapping generator."""
    elements = h.elements if isinstance(h, SubloopHandle) else tuple(h)
    w = normality_witness(t, elements)
    if w is None:
        return Report("normal", True, details={"order": len(elements)})
    return Report("normal", False, details={"order": len(elements), "generator": w})


def quotient_map(t: CayleyTable, h: SubloopHandle | Iterable[int]) -> tuple[CayleyTable, np.ndarray]:
    """Quotient table and the block index of every element.

    Blocks are the left cosets ``xH`` ordered by least element, so ``H``
    itself is block 0.  Raises :class:`PreconditionError` if the cosets do not
    partition the loop or the block product is ill-defined.
    """
    elements = h.elements if isinstance(h, SubloopHandle) else tuple(sorted(h))
    H = np.array(elements, dtype=np.intp)
    T = t.table
    n = t.n
    cosets = np.sort(T[:, H], axis=1)
    reps, inverse = np.unique(cosets, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).ravel()
    counts = np.zeros(n, dtype=int)
    np.add.at(counts, reps.ravel(), 1)
    if (counts != 1).any():
        raise PreconditionError("cosets of the subloop do not partition the loop")
    block = np.empty(n, dtype=np.intp)
    block[reps] = np.arange(len(reps))[:, None]
    # sort blocks by least element (np.unique already orders rows lexicographically)
    lead = reps[:, 0]
    qt = block[T[lead[:, None], lead[None, :]]]
    if not np.array_equal(qt[block[:, None], block[None, :]], block[T]):
        raise PreconditionError("block product is ill-defined; subloop is not normal")
    return CayleyTable(qt), block


def quotient(t: CayleyTable, h: SubloopHandle | Iterable[int]) -> CayleyTable:
    return quotient_map(t, h)[0]


def center(t: CayleyTable) -> SubloopHandle:
    """Elements that commute and associate with everything."""
    t.require_loop()
    T = t.table
    idx = np.arange(t.n)
    commuting = np.flatnonzero((T == T.T).all(axis=0))
    Z = []
    for a in commuting:
        Ta = T[a]
        # ax·y = a·xy
        if not np.array_equal(T[Ta[:, None], idx[None, :]], Ta[T]):
            continue
        # xa·y = x·ay
        if not np.array_equal(T[T[:, a][:, None], idx[None, :]], T[idx[:, None], Ta[None, :]]):
            continue
        # xy·a = x·ya
        if not np.array_equal(T[T, a], T[idx[:, None], T[:, a][None, :]]):
            continue
        Z.append(int(a))
    S = generated_subloop(t, Z)
    if len(S) != len(Z):
        raise ConsistencyError("center is not closed")
    return SubloopHandle(tuple(Z), (), normal=True)


def upper_central_series(t: CayleyTable) -> SeriesRecord:
    n = t.n
    terms = [SubloopHandle((0,), (), normal=True)]
    while True:
        cur = terms[-1]
        if not is_normal(t, cur):
            raise ConsistencyError(f"term {len(terms) - 1} of the upper central series is not normal")
        qt, block = quotient_map(t, cur)
        zq = center(qt)
        nxt = np.flatnonzero(np.isin(block, zq.elements))
        if len(nxt) == cur.order:
            break
        terms.append(SubloopHandle(tuple(int(v) for v in nxt), (), normal=True))
    reaches = terms[-1].order == n
    return SeriesRecord("upper-central", terms, reaches, len(terms) - 1)


def _is_abelian_group(t: CayleyTable) -> bool:
    T = t.table
    return bool(np.array_equal(T, T.T)) and first_associativity_failure(t) is None


def normal_closure(t: CayleyTable, seed: Iterable[int]) -> np.ndarray:
    """Least normal subloop containing ``seed``."""
    S = generated_subloop(t, seed)
    while True:
        mask = np.zeros(t.n, dtype=bool)
        mask[S] = True
        for _, _, arr in inner_mapping_blocks(t):
            mask[arr[:, S].ravel()] = True
        if mask.sum() == len(S):
            return S
        S = generated_subloop(t, np.flatnonzero(mask))


def _commutators_and_associators(t: CayleyTable) -> np.ndarray:
    T, ld = t.table, t.ldiv_table
    idx = np.arange(t.n)
    hit = np.zeros(t.n, dtype=bool)
    hit[ld[T.T, T].ravel()] = True                   # (yx) \ (xy)
    for x in range(t.n):
        lhs = T[x][T]                                # x(yz)
        rhs = T[T[x][:, None], idx[None, :]]         # (xy)z
        hit[ld[lhs, rhs].ravel()] = True
    return np.flatnonzero(hit)


def derived_subloop(t: CayleyTable, method: str = "closure",
                    cap: int = DEFAULT_SUBLOOP_CAP) -> tuple[np.ndarray, bool]:
    """Least normal subloop with abelian-group quotient.

    ``closure``: normal closure of all commutators ``(yx)\\(xy)`` and
    associators ``(x·yz)\\(xy·z)``.  ``lattice``: intersection of every
    enumerated normal subloop whose quotient is an abelian group.
    Returns ``(elements, reliable)``; reliability is false only when the
    lattice enumeration was incomplete.
    """
    reliable = True
    if method == "closure":
        S = normal_closure(t, _commutators_and_associators(t))
    elif method == "lattice":
        enum = enumerate_subloops(t, cap)
        reliable = enum.complete
        mask = np.ones(t.n, dtype=bool)
        for h in enum:
            if not is_normal(t, h):
                continue
            try:
                qt = quotient(t, h)
            except PreconditionError:
                continue
            if _is_abelian_group(qt):
                mask &= h.mask(t.n)
        S = np.flatnonzero(mask)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not _is_abelian_group(quotient(t, S)):
        raise ConsistencyError("quotient by the derived subloop is not an abelian group")
    return S, reliable


def derived_series(t: CayleyTable, method: str = "closure") -> SeriesRecord:
    """Iterated derived subloops; ``terminates`` means the series reaches ``{0}`` (solvable)."""
    current = np.arange(t.n)
    terms = [_handle(current)]
    reliable = True
    while len(current) > 1:
        sub = t.restrict(current)
        D, ok = derived_subloop(sub, method)
        reliable &= ok
        nxt = current[D]
        if len(nxt) == len(current):
            break
        current = nxt
        terms.append(_handle(current))
    solvable = terms[-1].order == 1
    return SeriesRecord("derived", terms, solvable, len(terms) - 1, reliable)


def _prime_factors(m: int) -> set[int]:
    return set(sympy.primefactors(m))


def _pi_part(n: int, primes: set[int]) -> int:
    out = 1
    for p, e in sympy.factorint(n).items():
        if p in primes:
            out *= p ** e
    return out


def _pi_search(t: CayleyTable, primes: set[int], budget: int) -> SubloopHandle:
    n = t.n
    target = _pi_part(n, primes)
    orders = t.order_profile.orders
    is_pi = np.array([_prime_factors(o) <= primes for o in orders])
    if target == 1:
        return SubloopHandle((0,))
    if is_pi.all() and target == n:
        return _handle(range(n))
    cand = [x for x in range(1, n) if is_pi[x]]
    # start from prime-order elements (Cauchy), then the rest in index order
    first = [x for x in cand if orders[x] in primes] + [x for x in cand if orders[x] not in primes]
    attempts = 0
    visited: set[tuple[int, ...]] = set()

    def dfs(S: np.ndarray, gens: list[int], options: list[int]) -> SubloopHandle | None:
        nonlocal attempts
        if len(S) == target:
            return _handle(S, gens)
        inside = np.zeros(n, dtype=bool)
        inside[S] = True
        for c in options:
            if inside[c]:
                continue
            attempts += 1
            if attempts > budget:
                raise ConsistencyError(f"subloop search exhausted its budget of {budget} attempts")
            S2 = generated_subloop(t, list(S) + [c])
            key = tuple(int(s) for s in S2)
            if key in visited:
                continue
            visited.add(key)
            if target % len(S2) or not is_pi[S2].all():
                continue
            found = dfs(S2, gens + [c], cand)
            if found is not None:
                return found
        return None

    result = dfs(np.array([0]), [], first)
    if result is None:
        raise ConsistencyError(f"no subloop of order {target} with {sorted(primes)}-elements found")
    return result


def sylow_subloop(t: CayleyTable, p: int, budget: int = SYLOW_BUDGET) -> SubloopHandle:
    """A subloop of order the full ``p``-part of ``|Q|`` made of ``p``-elements."""
    t.require_loop()
    if t.n % p:
        raise PreconditionError(f"{p} does not divide {t.n}")
    h = _pi_search(t, {p}, budget)
    return SubloopHandle(h.elements, h.generators, prime=p)


def hall_subloop(t: CayleyTable, primes: Iterable[int], budget: int = SYLOW_BUDGET) -> SubloopHandle:
    """A subloop of order the ``π``-part of ``|Q|`` made of ``π``-elements."""
    t.require_loop()
    return _pi_search(t, set(int(p) for p in primes), budget)


def lagrange_cauchy_audit(t: CayleyTable, cap: int = DEFAULT_SUBLOOP_CAP) -> Report:
    """Subloop orders divide along inclusions; every odd prime divisor has an element of that order."""
    enum = enumerate_subloops(t, cap)
    subs = enum.subloops
    details = {"subloops": len(subs), "orders": enum.orders, "complete": enum.complete}
    for a in subs:
        for b in subs:
            if a.order < b.order and b.order % a.order and a.issubset(b):
                return Report("lagrange-cauchy", False, details={**details, "violation": "lagrange",
                                                                   "inner": a.order, "outer": b.order})
    orders = set(t.order_profile.orders)
    for p in sorted(_prime_factors(t.n) - {2}):
        if p not in orders:
            return Report("lagrange-cauchy", False, details={**details, "violation": "cauchy",
                                                               "prime": p})
    return Report("lagrange-cauchy", True, details=details)


def center_transfer_check(q_bruck: CayleyTable) -> Report:
    """Center of an odd-order Bruck loop equals the center of its Γ-loop."""
    from .constructions import gamma_from_bruck

    gamma = gamma_from_bruck(q_bruck).table
    zb = center(q_bruck)
    zg = center(gamma)
    ok = zb.elements == zg.elements
    return Report("center-transfer", ok,
                  details={"bruck_center": zb.order, "gamma_center": zg.order})


def find_subloop_of_order(t: CayleyTable, order: int, first: Iterable[int] | None = None,
                          second: Iterable[int] | None = None) -> SubloopHandle | None:
    """First 2-generated subloop of the given order, scanning ``first x second`` in order."""
    first = range(t.n) if first is None else first
    second = list(range(t.n) if second is None else second)
    for x in first:
        for y in second:
            S = generated_subloop(t, [x, y])
            if len(S) == order:
                return _handle(S, (x, y))
    return None
