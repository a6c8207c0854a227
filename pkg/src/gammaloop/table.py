"""Finite loops as Cayley tables over ``0..n-1`` with the identity at ``0``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import LoopInputError, PreconditionError
from .perm import Permutation
from .report import Report

OPS = ("mul", "ldiv", "rdiv")


class CayleyTable:
    """An immutable ``n x n`` operation table.

    Entries are element indices.  Derived data (division tables, orders,
    square roots) is computed on first request and cached on the instance.
    Loop-only methods raise :class:`PreconditionError` if the table is not a
    loop with identity ``0``.
    """

    def __init__(self, table: Sequence[Sequence[int]] | np.ndarray,
                 labels: Sequence[str] | None = None):
        if isinstance(table, np.ndarray):
            arr = table
        else:
            rows = [list(r) for r in table]
            if any(len(r) != len(rows) for r in rows):
                raise LoopInputError("table rows are ragged or not square")
            arr = np.array(rows)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise LoopInputError(f"table must be a non-empty square, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            raise LoopInputError("table entries must be integers")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            r, c = np.argwhere((arr < 0) | (arr >= n))[0]
            raise LoopInputError(f"entry {arr[r, c]} at ({r},{c}) outside 0..{n - 1}")
        arr = np.array(arr, dtype=np.intp)
        arr.setflags(write=False)
        self._table = arr
        if labels is not None and len(labels) != n:
            raise LoopInputError("label count does not match order")
        self.labels = tuple(labels) if labels is not None else None

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def n(self) -> int:
        return self._table.shape[0]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CayleyTable) and np.array_equal(self._table, other._table)

    def __hash__(self) -> int:
        return hash(self._table.tobytes())

    def __repr__(self) -> str:
        return f"CayleyTable(n={self.n})"

    def rows(self) -> list[list[int]]:
        return self._table.tolist()

    # -- loop structure ------------------------------------------------------

    @cached_property
    def loop_report(self) -> Report:
        return _validate(self._table)

    def require_loop(self) -> None:
        if not self.loop_report.passed:
            raise PreconditionError(f"not a loop with identity 0: {self.loop_report.details}")

    @cached_property
    def ldiv_table(self) -> np.ndarray:
        """``ldiv_table[x, y] = x \\ y``."""
        self.require_loop()
        n, T = self.n, self._table
        ld = np.empty_like(T)
        ld[np.arange(n)[:, None], T] = np.arange(n)[None, :]
        ld.setflags(write=False)
        return ld

    @cached_property
    def rdiv_table(self) -> np.ndarray:
        """``rdiv_table[x, y] = x / y``."""
        self.require_loop()
        n, T = self.n, self._table
        rd = np.empty_like(T)
        rd[T, np.arange(n)[None, :]] = np.arange(n)[:, None]
        rd.setflags(write=False)
        return rd

    @cached_property
    def inverses(self) -> np.ndarray:
        """Right inverses ``x \\ 0``."""
        return self.ldiv_table[:, 0]

    def mul(self, x: int, y: int) -> int:
        return int(self._table[x, y])

    def ldiv(self, x: int, y: int) -> int:
        return int(self.ldiv_table[x, y])

    def rdiv(self, x: int, y: int) -> int:
        return int(self.rdiv_table[x, y])

    def op_table(self, op: str) -> np.ndarray:
        if op == "mul":
            return self._table
        if op == "ldiv":
            return self.ldiv_table
        if op == "rdiv":
            return self.rdiv_table
        raise LoopInputError(f"unknown operation {op!r}")

    # -- derived maps ---------------------------------------------------------

    @cached_property
    def order_profile(self) -> ElementOrderProfile:
        return _element_orders(self)

    @cached_property
    def squares(self) -> SqrtMap:
        return _sqrt_map(self)

    def sqrt(self, x: int) -> int:
        inv = self.squares.inverse
        if inv is None:
            raise PreconditionError("squaring is not a bijection; square roots undefined")
        return int(inv[x])

    # -- relabelling ----------------------------------------------------------

    def relabel(self, perm: Sequence[int] | np.ndarray) -> CayleyTable:
        """Table of the isomorphic copy where element ``x`` is renamed ``perm[x]``."""
        p = np.asarray(perm, dtype=np.intp)
        out = np.empty_like(self._table)
        out[p[:, None], p[None, :]] = p[self._table]
        return CayleyTable(out)

    def restrict(self, elements: Iterable[int]) -> CayleyTable:
        """Table of a closed subset, relabelled by ascending element index."""
        S = np.array(sorted(set(int(e) for e in elements)), dtype=np.intp)
        pos = np.full(self.n, -1, dtype=np.intp)
        pos[S] = np.arange(len(S))
        sub = pos[self._table[S[:, None], S[None, :]]]
        if (sub < 0).any():
            raise PreconditionError("subset is not closed under multiplication")
        return CayleyTable(sub)


@dataclass(frozen=True)
class ElementOrderProfile:
    orders: tuple[int, ...]
    exponent: int
    complete: bool = True


@dataclass(frozen=True)
class SqrtMap:
    forward: np.ndarray
    inverse: np.ndarray | None

    @property
    def bijective(self) -> bool:
        return self.inverse is not None


def _validate(T: np.ndarray) -> Report:
    n = T.shape[0]
    full = np.arange(n)
    for r in range(n):
        if len(np.unique(T[r])) != n:
            vals, counts = np.unique(T[r], return_counts=True)
            v = int(vals[np.argmax(counts > 1)])
            c = int(np.flatnonzero(T[r] == v)[1])
            return Report("loop", False, {"row": r, "col": c},
                          {"violation": "row", "repeated": v})
    for c in range(n):
        if len(np.unique(T[:, c])) != n:
            vals, counts = np.unique(T[:, c], return_counts=True)
            v = int(vals[np.argmax(counts > 1)])
            r = int(np.flatnonzero(T[:, c] == v)[1])
            return Report("loop", False, {"row": r, "col": c},
                          {"violation": "column", "repeated": v})
    if not np.array_equal(T[0], full):
        c = int(np.flatnonzero(T[0] != full)[0])
        return Report("loop", False, {"row": 0, "col": c}, {"violation": "identity"})
    if not np.array_equal(T[:, 0], full):
        r = int(np.flatnonzero(T[:, 0] != full)[0])
        return Report("loop", False, {"row": r, "col": 0}, {"violation": "identity"})
    return Report("loop", True, details={"order": n})


def validate_loop(t: CayleyTable | Sequence[Sequence[int]]) -> Report:
    """Latin-square plus two-sided identity at 0.

    Raises :class:`LoopInputError` on malformed input (ragged, out of range).
    """
    if not isinstance(t, CayleyTable):
        t = CayleyTable(t)
    return t.loop_report


def evaluate(t: CayleyTable, op: str, x: int, y: int) -> int:
    if not (0 <= x < t.n and 0 <= y < t.n):
        raise LoopInputError(f"element out of range for order {t.n}")
    return int(t.op_table(op)[x, y])


def translation(t: CayleyTable, x: int, side: str = "left") -> Permutation:
    """``left``: ``y -> x·y``; ``right``: ``y -> y·x``."""
    t.require_loop()
    if side == "left":
        return Permutation(t.table[x], check=False)
    if side == "right":
        return Permutation(t.table[:, x], check=False)
    raise LoopInputError(f"unknown side {side!r}")


def power(t: CayleyTable, x: int, k: int) -> int:
    """``0 L_x^k``; negative ``k`` walks the inverse translation."""
    t.require_loop()
    y = 0
    if k >= 0:
        row = t.table[x]
        for _ in range(k):
            y = row[y]
    else:
        row = t.ldiv_table[x]
        for _ in range(-k):
            y = row[y]
    return int(y)


def _element_orders(t: CayleyTable) -> ElementOrderProfile:
    t.require_loop()
    n, T = t.n, t.table
    orders = []
    complete = True
    for x in range(n):
        y, k = T[x, 0], 1
        while y != 0 and k <= n:
            y = T[x, y]
            k += 1
        if y != 0:
            complete = False
            orders.append(0)
        else:
            orders.append(k)
    exponent = math.lcm(*[o for o in orders if o > 0])
    return ElementOrderProfile(tuple(orders), exponent, complete)


def element_orders(t: CayleyTable) -> ElementOrderProfile:
    return t.order_profile


def _sqrt_map(t: CayleyTable) -> SqrtMap:
    t.require_loop()
    fwd = np.diagonal(t.table).copy()
    fwd.setflags(write=False)
    if len(np.unique(fwd)) != t.n:
        return SqrtMap(fwd, None)
    inv = np.empty_like(fwd)
    inv[fwd] = np.arange(t.n)
    inv.setflags(write=False)
    return SqrtMap(fwd, inv)


def sqrt_map(t: CayleyTable) -> SqrtMap:
    return t.squares


def is_associative(t: CayleyTable) -> bool:
    return first_associativity_failure(t) is None


def first_associativity_failure(t: CayleyTable) -> tuple[int, int, int] | None:
    """Lexicographically first ``(x, y, z)`` with ``(xy)z != x(yz)``."""
    T = t.table
    for x in range(t.n):
        lhs = T[T[x][:, None], np.arange(t.n)[None, :]]  # (xy)z over (y, z)
        rhs = T[x][T]                                   # x(yz)
        bad = lhs != rhs
        if bad.any():
            y, z = np.argwhere(bad)[0]
            return x, int(y), int(z)
    return None


def direct_product(a: CayleyTable, b: CayleyTable) -> CayleyTable:
    """Componentwise product; pair ``(i, j)`` is element ``i * |b| + j``."""
    na, nb = a.n, b.n
    A = a.table[:, None, :, None]
    B = b.table[None, :, None, :]
    prod = A * nb + B
    return CayleyTable(prod.reshape(na * nb, na * nb))


def _invariants(t: CayleyTable) -> list[tuple]:
    orders = t.order_profile.orders
    T = t.table
    return [(orders[x], Permutation(T[x], check=False).cycle_type(),
             Permutation(T[:, x], check=False).cycle_type()) for x in range(t.n)]


def _generating_sequence(t: CayleyTable) -> tuple[list[int], list[int], list[tuple[int, int] | None]]:
    """Pick generators and record how each element is reached as a product.

    Returns ``(gens, order, derivation)`` where ``order`` lists elements in
    discovery order and ``derivation[i]`` is ``None`` for the identity and
    generators, else the pair ``(l, r)`` with ``order[i] = l·r``.
    """
    T = t.table
    orders = t.order_profile.orders
    candidates = sorted(range(1, t.n), key=lambda x: (-orders[x], x))
    seen = {0: 0}
    order = [0]
    deriv: list[tuple[int, int] | None] = [None]
    gens: list[int] = []
    i = 0
    for g in candidates:
        if len(order) == t.n:
            break
        if g in seen:
            continue
        gens.append(g)
        seen[g] = len(order)
        order.append(g)
        deriv.append(None)
        # re-scan from the start so products with earlier elements are found
        i = 0
        while i < len(order):
            a = order[i]
            for j in range(i + 1):
                b = order[j]
                for l, r in ((a, b), (b, a)):
                    c = int(T[l, r])
                    if c not in seen:
                        seen[c] = len(order)
                        order.append(c)
                        deriv.append((l, r))
            i += 1
    return gens, order, deriv


def is_isomorphic(a: CayleyTable, b: CayleyTable) -> dict[int, int] | None:
    """Return an isomorphism ``a -> b`` as a dict, or ``None``.

    Backtracks over generator images.  Candidate images must match the
    element's (order, left cycle type, right cycle type) invariant and are
    tried in increasing index order.
    """
    if a.n != b.n:
        return None
    a.require_loop()
    b.require_loop()
    inv_a, inv_b = _invariants(a), _invariants(b)
    if sorted(inv_a) != sorted(inv_b):
        return None
    gens, order, deriv = _generating_sequence(a)
    Ta, Tb = a.table, b.table
    n = a.n
    by_inv: dict[tuple, list[int]] = {}
    for y in range(n):
        by_inv.setdefault(inv_b[y], []).append(y)
    # positions in ``order`` where each generator's segment starts
    starts = [order.index(g) for g in gens] + [len(order)]

    f = np.full(n, -1, dtype=np.intp)
    used = np.zeros(n, dtype=bool)
    f[0] = 0
    used[0] = True

    def extend(seg: int) -> list[int] | None:
        """Fill images for the derived elements of segment ``seg``; return assigned."""
        assigned = []
        for pos in range(starts[seg] + 1, starts[seg + 1]):
            l, r = deriv[pos]
            x = order[pos]
            img = int(Tb[f[l], f[r]])
            if used[img] or inv_a[x] != inv_b[img]:
                for z in assigned:
                    used[f[z]] = False
                    f[z] = -1
                return None
            f[x] = img
            used[img] = True
            assigned.append(x)
        return assigned

    def search(k: int) -> bool:
        if k == len(gens):
            return bool(np.array_equal(f[Ta], Tb[f[:, None], f[None, :]]))
        g = gens[k]
        for cand in by_inv[inv_a[g]]:
            if used[cand]:
                continue
            f[g] = cand
            used[cand] = True
            assigned = extend(k)
            if assigned is not None:
                if search(k + 1):
                    return True
                for z in assigned:
                    used[f[z]] = False
                    f[z] = -1
            used[cand] = False
            f[g] = -1
        return False

    if search(0):
        return {x: int(f[x]) for x in range(n)}
    return None


# -- loop file format ---------------------------------------------------------

def parse_loop(text: str, normalize: bool = False) -> CayleyTable:
    """Parse the ``loop <n>`` text format.

    With ``normalize`` the loop is relabelled so its identity is element 0;
    otherwise a non-zero identity is rejected.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise LoopInputError("empty loop file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "loop" or not head[1].isdigit():
        raise LoopInputError(f"bad header {lines[0]!r}; expected 'loop <n>'")
    n = int(head[1])
    body = lines[1:]
    if len(body) != n:
        raise LoopInputError(f"expected {n} rows, found {len(body)}")
    try:
        rows = [[int(tok) for tok in ln.split()] for ln in body]
    except ValueError as exc:
        raise LoopInputError(f"non-integer entry: {exc}") from None
    t = CayleyTable(rows)
    if normalize:
        return normalize_identity(t)
    rep = t.loop_report
    if not rep.passed and rep.details.get("violation") == "identity":
        raise LoopInputError("identity is not element 0; pass --normalize to relabel")
    return t


def normalize_identity(t: CayleyTable) -> CayleyTable:
    """Swap labels so the two-sided identity becomes element 0."""
    T = t.table
    n = t.n
    full = np.arange(n)
    for e in range(n):
        if np.array_equal(T[e], full) and np.array_equal(T[:, e], full):
            perm = np.arange(n)
            perm[0], perm[e] = e, 0
            return t.relabel(perm)
    raise LoopInputError("table has no two-sided identity")


def format_loop(t: CayleyTable, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"loop {t.n}")
    for row in t.table:
        out.append(" ".join(str(int(v)) for v in row))
    return "\n".join(out) + "\n"


def read_loop(path: str, normalize: bool = False) -> CayleyTable:
    with open(path) as fh:
        return parse_loop(fh.read(), normalize=normalize)


def write_loop(t: CayleyTable, path_or_file: str | TextIO, comment: str | None = None) -> None:
    text = format_loop(t, comment)
    if isinstance(path_or_file, str):
        with open(path_or_file, "w") as fh:
            fh.write(text)
    else:
        path_or_file.write(text)


def generated_subloop(t: CayleyTable, seed: Iterable[int]) -> np.ndarray:
    """Sorted elements of the least subset containing ``seed`` and 0 closed under ·, \\, /."""
    tables = (t.table, t.ldiv_table, t.rdiv_table)
    mask = np.zeros(t.n, dtype=bool)
    mask[0] = True
    mask[[int(s) for s in seed]] = True
    count = int(mask.sum())
    while True:
        S = np.flatnonzero(mask)
        for op in tables:
            mask[op[S[:, None], S[None, :]].ravel()] = True
        new_count = int(mask.sum())
        if new_count == count:
            return S
        count = new_count
