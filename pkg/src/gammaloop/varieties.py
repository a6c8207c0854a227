"""Exhaustive axiom checkers over Cayley tables.

Every check scans all tuples; the reported counterexample is the
lexicographically first one.  Equations are rendered in the identity
language of :mod:`gammaloop.terms` (``*`` loosest, ``\\`` and ``/`` tighter).
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from .perm import inner_mapping_blocks
from .report import VarietyReport
from .table import CayleyTable, first_associativity_failure, generated_subloop

ASSOCIATIVE = "x*(y*z) = (x*y)*z"
COMMUTATIVE = "x*y = y*x"
INVERSES = "x\\e = e/x"
AIP = "(x*y)\\e = (x\\e)*(y\\e)"
GAMMA3 = "(x\\e)*(x*y) = x*((x\\e)*y)"
GAMMA4 = ("(x\\e)\\(x*((y\\e)\\(y*((x\\e)\\(x*z))))) = "
          "(((x\\e)\\(x*y))\\e)\\(((x\\e)\\(x*y))*z)")
BOL = "x*(y*(x*z)) = (x*(y*x))*z"
MOUFANG_C = "(x*x)*(y*z) = (x*y)*(x*z)"
BRUCK_SQUARE = "(x*y)*(x*y) = x*((y*y)*x)"


def _first(bad: np.ndarray) -> tuple[int, ...] | None:
    if not bad.any():
        return None
    return tuple(int(i) for i in np.argwhere(bad)[0])


def _report(variety: str, witness: tuple | None, names: str, equation: str,
            started: float, **details) -> VarietyReport:
    elapsed = time.perf_counter() - started
    if witness is None:
        return VarietyReport(variety, True, details=details, equation=equation, elapsed=elapsed)
    return VarietyReport(variety, False, dict(zip(names, witness)), details,
                         equation=equation, elapsed=elapsed)


def _scan_triples(t: CayleyTable, fn: Callable[[int], np.ndarray]) -> tuple | None:
    """Run ``fn(x)`` -> bool violation array over ``(y, z)`` for each ``x``."""
    for x in range(t.n):
        w = _first(fn(x))
        if w is not None:
            return (x, *w)
    return None


def check_basic(t: CayleyTable, which: str) -> VarietyReport:
    t.require_loop()
    t0 = time.perf_counter()
    T = t.table
    if which == "associative":
        return _report(which, first_associativity_failure(t), "xyz", ASSOCIATIVE, t0)
    if which == "commutative":
        return _report(which, _first(T != T.T), "xy", COMMUTATIVE, t0)
    raise ValueError(f"unknown basic property {which!r}")


def check_inverses(t: CayleyTable) -> VarietyReport:
    t0 = time.perf_counter()
    bad = t.ldiv_table[:, 0] != t.rdiv_table[0, :]
    return _report("two-sided-inverses", _first(bad), "x", INVERSES, t0)


def check_aip(t: CayleyTable) -> VarietyReport:
    """``(xy)⁻¹ = x⁻¹ y⁻¹``; two-sided inverses are checked first."""
    inv_rep = check_inverses(t)
    if not inv_rep.passed:
        inv_rep.name = "aip"
        inv_rep.details["violation"] = "inverse-mismatch"
        return inv_rep
    t0 = time.perf_counter()
    T, inv = t.table, t.inverses
    bad = inv[T] != T[inv[:, None], inv[None, :]]
    return _report("aip", _first(bad), "xy", AIP, t0)


def check_gamma3(t: CayleyTable) -> VarietyReport:
    t0 = time.perf_counter()
    T, inv = t.table, t.inverses
    n = t.n
    lhs = T[inv[:, None], T]
    rhs = T[np.arange(n)[:, None], T[inv]]
    return _report("gamma3", _first(lhs != rhs), "xy", GAMMA3, t0)


def p_operators(t: CayleyTable) -> np.ndarray:
    """``P[x, y] = y P_x = x⁻¹ \\ (x y)``, i.e. ``P_x = L_x L_{x⁻¹}⁻¹``."""
    T, ld, inv = t.table, t.ldiv_table, t.inverses
    return ld[inv[:, None], T]


def check_gamma4(t: CayleyTable) -> VarietyReport:
    """``P_x P_y P_x = P_{y P_x}`` as permutations, for all ``x, y``."""
    t0 = time.perf_counter()
    P = p_operators(t)

    def bad(x):
        Px = P[x]
        return Px[P[:, Px]] != P[Px]

    return _report("gamma4", _scan_triples(t, bad), "xyz", GAMMA4, t0)


def check_gamma(t: CayleyTable) -> VarietyReport:
    """Γ₁–Γ₄ in order; the report names the first failing axiom."""
    t.require_loop()
    t0 = time.perf_counter()
    steps = [
        ("gamma1", lambda: check_basic(t, "commutative")),
        ("gamma2", lambda: check_aip(t)),
        ("gamma3", lambda: check_gamma3(t)),
        ("gamma4", lambda: check_gamma4(t)),
    ]
    for axiom, run in steps:
        rep = run()
        if not rep.passed:
            rep.name = "gamma"
            rep.details["failed_axiom"] = axiom
            rep.elapsed = time.perf_counter() - t0
            return rep
    return VarietyReport("gamma", True, equation=None, elapsed=time.perf_counter() - t0)


def check_bol_bruck(t: CayleyTable, which: str = "bruck") -> VarietyReport:
    """Left Bol identity; ``bruck`` additionally requires AIP."""
    t.require_loop()
    t0 = time.perf_counter()
    T = t.table

    def bad(x):
        rhs = T[T[x][T[:, x]]]          # (x(yx)) z over (y, z)
        lhs = T[x][T[:, T[x]]]          # x(y(xz))
        return lhs != rhs

    rep = _report(which, _scan_triples(t, bad), "xyz", BOL, t0)
    if which == "bol" or not rep.passed:
        rep.name = which
        return rep
    if which != "bruck":
        raise ValueError(f"unknown variety {which!r}")
    aip = check_aip(t)
    aip.name = "bruck"
    aip.elapsed = time.perf_counter() - t0
    return aip


def check_moufang_commutative(t: CayleyTable) -> VarietyReport:
    """``x²(yz) = (xy)(xz)``: the commutative Moufang identity."""
    t.require_loop()
    t0 = time.perf_counter()
    T = t.table
    sq = np.diagonal(T)

    def bad(x):
        return T[sq[x]][T] != T[T[x][:, None], T[x][None, :]]

    return _report("moufang", _scan_triples(t, bad), "xyz", MOUFANG_C, t0)


def check_power_associative(t: CayleyTable) -> VarietyReport:
    """Every 1-generated subloop is an abelian group."""
    t.require_loop()
    t0 = time.perf_counter()
    T = t.table
    done = np.zeros(t.n, dtype=bool)
    for g in range(t.n):
        if done[g]:
            continue
        S = generated_subloop(t, [g])
        sub = T[S[:, None], S[None, :]]
        w = _first(sub != sub.T)
        if w is not None:
            return _report("power-associative", tuple(int(S[i]) for i in w), "xy",
                           COMMUTATIVE, t0, generator=g)
        for i, a in enumerate(S):
            lhs = T[T[a][S][:, None], S[None, :]]
            rhs = T[a][T[S[:, None], S[None, :]]]
            w = _first(lhs != rhs)
            if w is not None:
                return _report("power-associative", (int(a), int(S[w[0]]), int(S[w[1]])),
                               "xyz", ASSOCIATIVE, t0, generator=g)
        # every element of an abelian-group subloop generates an abelian group
        done[S] = True
    return _report("power-associative", None, "", "", t0)


def check_automorphic(t: CayleyTable, max_elements: int = 4_000_000) -> VarietyReport:
    """Every standard inner-mapping generator is an automorphism."""
    t.require_loop()
    t0 = time.perf_counter()
    T = t.table
    n = t.n
    chunk = max(1, max_elements // (n * n))
    for family, x, arr in inner_mapping_blocks(t):
        for start in range(0, n, chunk):
            F = arr[start:start + chunk]
            bad = F[:, T] != T[F[:, :, None], F[:, None, :]]
            w = _first(bad)
            if w is not None:
                k, u, v = w
                row = start + k
                gen = f"T({row})" if family == "T" else f"{family}({x},{row})"
                return _report("automorphic", (u, v), "uv", "f(u*v) = f(u)*f(v)", t0,
                               generator=gen)
    return _report("automorphic", None, "", "", t0)


def check_left_power_alternative(t: CayleyTable) -> VarietyReport:
    """``L_{x^k} = L_x^k`` for ``1 <= k <= order(x)``."""
    t.require_loop()
    t0 = time.perf_counter()
    T = t.table
    orders = t.order_profile.orders
    for x in range(t.n):
        cur = T[x].copy()
        for k in range(1, orders[x] + 1):
            xk = cur[0]
            if not np.array_equal(T[xk], cur):
                return _report("left-power-alternative", (x, k), "xk",
                               "L(x^k) = L(x)^k", t0)
            cur = T[x][cur]
    return _report("left-power-alternative", None, "", "", t0)


# -- power and operator invariants of Γ-loops and Bruck loops ----------------

def power_table(t: CayleyTable, bound: int) -> np.ndarray:
    """``W[x, n + bound] = x^n = 0 L_x^n`` for ``-bound <= n <= bound``, by walking translations."""
    T, ld = t.table, t.ldiv_table
    n = t.n
    W = np.zeros((n, 2 * bound + 1), dtype=np.intp)
    idx = np.arange(n)
    fwd = np.zeros(n, dtype=np.intp)
    back = np.zeros(n, dtype=np.intp)
    for k in range(1, bound + 1):
        fwd = T[idx, fwd]
        back = ld[idx, back]
        W[:, bound + k] = fwd
        W[:, bound - k] = back
    return W


def check_p_identities(t: CayleyTable) -> VarietyReport:
    """``P_x = L_x L_{x⁻¹}⁻¹ = L_{x⁻¹}⁻¹ L_x`` and ``P_x L_x = L_x P_x``."""
    t.require_loop()
    t0 = time.perf_counter()
    T, ld, inv = t.table, t.ldiv_table, t.inverses
    n = t.n
    P = p_operators(t)
    alt = T[np.arange(n)[:, None], ld[inv]]          # y -> x (x⁻¹ \ y)
    w = _first(P != alt)
    if w is not None:
        return _report("p-identities", w, "xy", "(x\\e)\\(x*y) = x*((x\\e)\\y)", t0, part="P1")
    lhs = T[np.arange(n)[:, None], P]                # y P_x L_x
    rhs = P[np.arange(n)[:, None], T]                # y L_x P_x
    w = _first(lhs != rhs)
    if w is not None:
        return _report("p-identities", w, "xy", "x*((x\\e)\\(x*y)) = (x\\e)\\(x*(x*y))", t0,
                       part="P2")
    return _report("p-identities", None, "", "", t0)


def check_power_operator_lemma(t: CayleyTable, bound: int | None = None) -> VarietyReport:
    """``x^n P_x = x^{n+2}``, ``P_x^n = P_{x^n}``, ``x^k P_{x^n} = x^{k+2n}``.

    ``n`` and ``k`` range over ``[-bound, bound]`` (default: the exponent).
    """
    t.require_loop()
    t0 = time.perf_counter()
    e = bound if bound is not None else t.order_profile.exponent
    W = power_table(t, 3 * e)
    off = 3 * e
    P = p_operators(t)
    ns = np.arange(-e, e + 1)
    for x in range(t.n):
        # (a)
        bad = P[x, W[x, off + ns]] != W[x, off + ns + 2]
        if bad.any():
            return _report("power-operator-lemma", (x, int(ns[np.argmax(bad)])), "xn",
                           "x^n P_x = x^(n+2)", t0, part="a")
        # (b): P_x^n as repeated composition
        Px = P[x]
        Px_inv = np.empty_like(Px)
        Px_inv[Px] = np.arange(t.n)
        for m in ns:
            step = Px if m >= 0 else Px_inv
            cur = np.arange(t.n)
            for _ in range(abs(int(m))):
                cur = step[cur]
            if not np.array_equal(cur, P[W[x, off + m]]):
                return _report("power-operator-lemma", (x, int(m)), "xn",
                               "P_x^n = P_(x^n)", t0, part="b")
        # (c)
        for m in ns:
            xm = W[x, off + m]
            bad = P[xm, W[x, off + ns]] != W[x, off + ns + 2 * m]
            if bad.any():
                return _report("power-operator-lemma", (x, int(ns[np.argmax(bad)]), int(m)),
                               "xkn", "x^k P_(x^n) = x^(k+2n)", t0, part="c")
    return _report("power-operator-lemma", None, "", "", t0)


def check_pa(t: CayleyTable, m: int | None = None) -> VarietyReport:
    """PA(m): ``x^i x^j = x^{i+j}`` for ``|i| <= m``, ``|j| <= m + 1``."""
    t.require_loop()
    t0 = time.perf_counter()
    m = t.order_profile.exponent if m is None else m
    off = 2 * m + 1
    W = power_table(t, off)
    T = t.table
    i = np.arange(-m, m + 1)
    j = np.arange(-m - 1, m + 2)
    for x in range(t.n):
        lhs = T[W[x, off + i][:, None], W[x, off + j][None, :]]
        rhs = W[x, off + i[:, None] + j[None, :]]
        w = _first(lhs != rhs)
        if w is not None:
            return _report(f"pa({m})", (x, int(i[w[0]]), int(j[w[1]])), "xij",
                           "x^i * x^j = x^(i+j)", t0)
    return _report(f"pa({m})", None, "", "", t0)


def check_bruck_square(t: CayleyTable) -> VarietyReport:
    """``(xy)² = x(y² x)``, which holds in every Bruck loop."""
    t.require_loop()
    t0 = time.perf_counter()
    T = t.table
    n = t.n
    sq = np.diagonal(T)
    idx = np.arange(n)
    lhs = sq[T]
    rhs = T[idx[:, None], T[sq[None, :], idx[:, None]]]
    return _report("bruck-square", _first(lhs != rhs), "xy", BRUCK_SQUARE, t0)


VARIETIES: dict[str, Callable[[CayleyTable], VarietyReport]] = {
    "associative": lambda t: check_basic(t, "associative"),
    "commutative": lambda t: check_basic(t, "commutative"),
    "aip": check_aip,
    "gamma3": check_gamma3,
    "gamma4": check_gamma4,
    "gamma": check_gamma,
    "bol": lambda t: check_bol_bruck(t, "bol"),
    "bruck": lambda t: check_bol_bruck(t, "bruck"),
    "moufang": check_moufang_commutative,
    "power-assoc": check_power_associative,
    "automorphic": check_automorphic,
    "left-power-alt": check_left_power_alternative,
    "p-identities": check_p_identities,
    "power-lemma": check_power_operator_lemma,
    "pa": check_pa,
    "bruck-square": check_bruck_square,
}
