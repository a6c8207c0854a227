"""Odd-order group corpus as Cayley tables.

Families: cyclic, abelian products of cyclics, semidirect products
``C_m ⋊ C_k``, Heisenberg groups over ``Z/p`` and the order-375
nonmetabelian group ``heisenberg(5) ⋊ C_3``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .errors import LoopInputError, PreconditionError
from .report import Report
from .table import CayleyTable, direct_product, first_associativity_failure, validate_loop

FAMILIES = ("cyclic", "abelian", "semidirect", "heisenberg", "g375")


@dataclass(frozen=True)
class GroupSpec:
    """Family tag plus integer parameters.

    ``cyclic``: ``(n,)``; ``abelian``: moduli; ``semidirect``: ``(m, k, r)``
    for ``C_m ⋊ C_k`` with the generator of ``C_k`` acting as ``a -> r*a``;
    ``heisenberg``: ``(p,)``; ``g375``: no parameters.
    """

    family: str
    params: tuple[int, ...] = field(default_factory=tuple)

    def name(self) -> str:
        if self.family == "g375":
            return "g375"
        return f"{self.family}({','.join(map(str, self.params))})"


def cyclic(n: int) -> CayleyTable:
    if n < 1:
        raise LoopInputError("cyclic order must be positive")
    a = np.arange(n)
    return CayleyTable((a[:, None] + a[None, :]) % n)


def abelian(moduli: Sequence[int]) -> CayleyTable:
    if not moduli:
        raise LoopInputError("abelian family needs at least one modulus")
    return reduce(direct_product, [cyclic(m) for m in moduli])


def semidirect_product(a: CayleyTable, b: CayleyTable, action: np.ndarray) -> CayleyTable:
    """``A ⋊ B`` with ``(x, s)(y, t) = (x · φ_s(y), s t)``.

    ``action[s]`` is the image array of ``φ_s`` on ``A``.  Element ``(x, s)``
    is index ``x * |B| + s``.  Raises :class:`LoopInputError` naming the
    failing pair if ``φ`` is not a homomorphism ``B -> Aut(A)``.
    """
    na, nb = a.n, b.n
    action = np.asarray(action, dtype=np.intp)
    if action.shape != (nb, na):
        raise LoopInputError(f"action must have shape {(nb, na)}")
    A, B = a.table, b.table
    for s in range(nb):
        phi = action[s]
        if len(np.unique(phi)) != na:
            raise LoopInputError(f"action of {s} is not a bijection")
        bad = phi[A] != A[phi[:, None], phi[None, :]]
        if bad.any():
            x, y = np.argwhere(bad)[0]
            raise LoopInputError(f"action of {s} is not an automorphism at pair ({x},{y})")
    for s in range(nb):
        for t in range(nb):
            # φ_{st} must equal φ_t followed by φ_s  (apply φ_s to φ_t(y))
            if not np.array_equal(action[B[s, t]], action[s][action[t]]):
                raise LoopInputError(f"action is not a homomorphism at pair ({s},{t})")
    x = np.arange(na)[:, None, None, None]
    s = np.arange(nb)[None, :, None, None]
    y = np.arange(na)[None, None, :, None]
    t = np.arange(nb)[None, None, None, :]
    first = A[x, action[s, y]]
    second = B[s, t]
    prod = first * nb + second
    return CayleyTable(prod.reshape(na * nb, na * nb))


def cyclic_semidirect(m: int, k: int, r: int) -> CayleyTable:
    """``C_m ⋊ C_k`` where the generator of ``C_k`` multiplies by ``r`` mod ``m``."""
    if pow(r, k, m) != 1 % m:
        raise LoopInputError(f"{r}^{k} is not 1 mod {m}; action has wrong order")
    action = np.array([(np.arange(m) * pow(r, s, m)) % m for s in range(k)])
    return semidirect_product(cyclic(m), cyclic(k), action)


def heisenberg(p: int) -> CayleyTable:
    """Upper unitriangular 3x3 matrices over ``Z/p``.

    ``(a, b, c)`` is the matrix with ``a, b`` on the superdiagonal and ``c``
    in the corner; index ``a p² + b p + c``.  Product adds componentwise with
    ``c'' = c + c' + a b'``.
    """
    if p < 2:
        raise LoopInputError("heisenberg needs p >= 2")
    idx = np.arange(p ** 3)
    a, b, c = idx // (p * p), (idx // p) % p, idx % p
    na = (a[:, None] + a[None, :]) % p
    nb = (b[:, None] + b[None, :]) % p
    nc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    return CayleyTable(na * p * p + nb * p + nc)


def heisenberg_automorphism(p: int, matrix: Sequence[Sequence[int]]) -> np.ndarray:
    """Lift a determinant-1 linear map of ``(Z/p)²`` to ``heisenberg(p)``.

    The lift is conjugated through the symmetric coordinates
    ``c_sym = c - ab/2`` where ``SL_2`` acts by ``(v, c) -> (Mv, c)``; the
    center is fixed pointwise.  Requires odd ``p``.
    """
    if p % 2 == 0:
        raise LoopInputError("symmetric lift needs odd p")
    (m00, m01), (m10, m11) = matrix
    if (m00 * m11 - m01 * m10) % p != 1:
        raise LoopInputError("matrix must have determinant 1 mod p")
    half = pow(2, -1, p)
    idx = np.arange(p ** 3)
    a, b, c = idx // (p * p), (idx // p) % p, idx % p
    a2 = (m00 * a + m01 * b) % p
    b2 = (m10 * a + m11 * b) % p
    c_sym = (c - a * b * half) % p
    c2 = (c_sym + a2 * b2 * half) % p
    return a2 * p * p + b2 * p + c2


# order-3, determinant-1 map (a, b) -> (-b, a - b); basis (u, v) -> (v, -u - v)
G375_MATRIX = ((0, -1), (1, -1))


def g375() -> CayleyTable:
    """``heisenberg(5) ⋊ C_3``: odd order 375, not metabelian."""
    p = 5
    alpha = heisenberg_automorphism(p, G375_MATRIX)
    ident = np.arange(p ** 3)
    action = np.array([ident, alpha, alpha[alpha]])
    g = semidirect_product(heisenberg(p), cyclic(3), action)
    if is_metabelian(g).passed:
        raise PreconditionError("chosen lift produced a metabelian group")
    return g


_BUILDERS: dict[str, Callable[..., CayleyTable]] = {
    "cyclic": lambda n: cyclic(n),
    "abelian": lambda *m: abelian(m),
    "semidirect": lambda m, k, r: cyclic_semidirect(m, k, r),
    "heisenberg": lambda p: heisenberg(p),
    "g375": lambda: g375(),
}

_ARITY = {"cyclic": 1, "semidirect": 3, "heisenberg": 1, "g375": 0}


def build_group(spec: GroupSpec, check: bool = True) -> CayleyTable:
    """Materialize ``spec``; with ``check`` the table is verified to be an associative loop."""
    if spec.family not in _BUILDERS:
        raise LoopInputError(f"unknown family {spec.family!r}; choose from {FAMILIES}")
    arity = _ARITY.get(spec.family)
    if arity is not None and len(spec.params) != arity:
        raise LoopInputError(f"family {spec.family} takes {arity} parameter(s)")
    g = _BUILDERS[spec.family](*spec.params)
    if check:
        rep = validate_loop(g)
        if not rep.passed:
            raise PreconditionError(f"{spec.name()} is not a loop: {rep.details}")
        if g.n <= 400 and first_associativity_failure(g) is not None:
            raise PreconditionError(f"{spec.name()} is not associative")
    return g


def require_group(g: CayleyTable) -> None:
    g.require_loop()
    if first_associativity_failure(g) is not None:
        raise PreconditionError("input is not associative")


def subgroup_closure(g: CayleyTable, seed: Sequence[int]) -> np.ndarray:
    """Sorted elements of the subgroup generated by ``seed``."""
    T = g.table
    mask = np.zeros(g.n, dtype=bool)
    mask[0] = True
    mask[list(seed)] = True
    while True:
        S = np.flatnonzero(mask)
        new = np.zeros_like(mask)
        new[T[S[:, None], S[None, :]].ravel()] = True
        new |= mask
        if new.sum() == mask.sum():
            return S
        mask = new


def commutator_table(g: CayleyTable) -> np.ndarray:
    """``C[x, y] = [x, y] = x⁻¹ y⁻¹ x y``."""
    T, inv = g.table, g.inverses
    # [x, y] = (yx)⁻¹ (xy)
    return T[inv[T.T], T]


def is_metabelian(g: CayleyTable) -> Report:
    """Derived subgroup via commutator closure, then test it is abelian."""
    require_group(g)
    D = subgroup_closure(g, np.unique(commutator_table(g)).tolist())
    sub = g.table[D[:, None], D[None, :]]
    abelian_derived = bool(np.array_equal(sub, sub.T))
    return Report("metabelian", abelian_derived, details={"derived_order": len(D)})


def group_sqrt(g: CayleyTable, x: int) -> int:
    """``x^((m+1)/2)`` for ``x`` of odd order ``m``."""
    m = g.order_profile.orders[x]
    if m % 2 == 0:
        raise PreconditionError(f"element {x} has even order {m}")
    y = 0
    row = g.table[x]
    for _ in range((m + 1) // 2):
        y = row[y]
    return int(y)


def group_sqrt_array(g: CayleyTable) -> np.ndarray:
    """Vectorized :func:`group_sqrt` over all elements."""
    orders = np.array(g.order_profile.orders)
    if (orders % 2 == 0).any():
        x = int(np.flatnonzero(orders % 2 == 0)[0])
        raise PreconditionError(f"element {x} has even order {orders[x]}")
    T = g.table
    k = (orders + 1) // 2
    out = np.zeros(g.n, dtype=np.intp)
    cur = np.zeros(g.n, dtype=np.intp)
    idx = np.arange(g.n)
    for step in range(1, int(k.max()) + 1):
        cur = T[idx, cur]
        hit = k == step
        out[hit] = cur[hit]
    return out


def corpus() -> dict[str, CayleyTable]:
    """The odd-order group corpus used throughout the test suite."""
    return {
        "C3": cyclic(3),
        "C5": cyclic(5),
        "C7": cyclic(7),
        "C9": cyclic(9),
        "C15": cyclic(15),
        "C3xC3": abelian([3, 3]),
        "C7:C3": cyclic_semidirect(7, 3, 2),
        "heis3": heisenberg(3),
        "heis5": heisenberg(5),
        "g375": g375(),
    }
