"""Permutations on ``range(n)`` under the right-action convention.

A permutation is stored as its image array ``p`` (point ``i`` goes to
``p[i]``).  Products act left to right: ``(i)(p*q) = ((i)p)q``, so
``L_x * L_y`` sends ``z`` to ``y·(x·z)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ClosureIncomplete, LoopInputError, PreconditionError
from .report import Report

DEFAULT_CAP = 2_000_000


class Permutation:
    """Immutable bijection of ``range(n)``."""

    __slots__ = ("_img", "_key")

    def __init__(self, images: Iterable[int] | np.ndarray, check: bool = True):
        img = np.array(images, dtype=np.intp)
        if img.ndim != 1:
            raise LoopInputError("permutation images must be one-dimensional")
        if check:
            n = len(img)
            seen = np.zeros(n, dtype=bool)
            if n and (img.min() < 0 or img.max() >= n):
                raise LoopInputError("permutation image out of range")
            seen[img] = True
            if not seen.all():
                raise LoopInputError("images do not form a bijection")
        img.setflags(write=False)
        self._img = img
        self._key = img.tobytes()

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(np.arange(n), check=False)

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        img = np.arange(n)
        for cyc in cycles:
            for i, a in enumerate(cyc):
                img[a] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @property
    def images(self) -> np.ndarray:
        return self._img

    @property
    def n(self) -> int:
        return len(self._img)

    def __call__(self, point: int) -> int:
        return int(self._img[point])

    def __len__(self) -> int:
        return len(self._img)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __mul__(self, other: Permutation) -> Permutation:
        if self.n != other.n:
            raise LoopInputError(f"size mismatch: {self.n} vs {other.n}")
        return Permutation(other._img[self._img], check=False)

    def inverse(self) -> Permutation:
        inv = np.empty_like(self._img)
        inv[self._img] = np.arange(self.n)
        return Permutation(inv, check=False)

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = np.arange(self.n)
        base = self._img
        while k:
            if k & 1:
                result = base[result]
            base = base[base]
            k >>= 1
        return Permutation(result, check=False)

    def commutator(self, other: Permutation) -> Permutation:
        """``[p, q] = p⁻¹ q⁻¹ p q``."""
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._img, np.arange(self.n)))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = int(self._img[start])
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = int(self._img[j])
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    def order(self) -> int:
        return math.lcm(*self.cycle_type()) if self.n else 1

    def sqrt(self) -> Permutation | None:
        """The square root lying in the cyclic group of ``self``, if the order is odd."""
        m = self.order()
        if m % 2 == 0:
            return None
        return self ** ((m + 1) // 2)

    def __str__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self._img.tolist()})"


def perm_algebra(p: Permutation, q: Permutation | None, op: str) -> Permutation:
    """Compose, invert or take the commutator of permutations."""
    if op == "inverse":
        return p.inverse()
    if q is None:
        raise LoopInputError(f"operation {op!r} needs two permutations")
    if p.n != q.n:
        raise LoopInputError(f"size mismatch: {p.n} vs {q.n}")
    if op == "compose":
        return p * q
    if op == "commutator":
        return p.commutator(q)
    raise LoopInputError(f"unknown permutation operation {op!r}")


def perm_order_and_sqrt(p: Permutation) -> tuple[int, Permutation | None]:
    return p.order(), p.sqrt()


@dataclass
class PermGroup:
    """Permutation group materialized as an element array.

    ``elements`` rows are in discovery order; row 0 is the identity.
    When ``complete`` is false the cap was hit and no closure claims hold.
    """

    n: int
    generators: list[Permutation]
    elements: np.ndarray
    complete: bool
    cap: int
    _index: dict[bytes, int] = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.size

    def __contains__(self, p: Permutation) -> bool:
        return p.images.tobytes() in self._index

    def index(self, p: Permutation) -> int:
        return self._index[p.images.tobytes()]

    def __iter__(self) -> Iterator[Permutation]:
        for row in self.elements:
            yield Permutation(row, check=False)


def closure(generators: Sequence[Permutation], cap: int = DEFAULT_CAP,
            n: int | None = None) -> PermGroup:
    """Breadth-first closure of ``generators`` under right multiplication.

    Discovery order is deterministic: the identity, then FIFO over the
    frontier, trying generators in the given order.
    """
    if n is None:
        if not generators:
            raise LoopInputError("point count needed when there are no generators")
        n = generators[0].n
    if any(g.n != n for g in generators):
        raise LoopInputError("generators act on different point counts")
    gens = [g.images for g in generators]
    ident = np.arange(n, dtype=np.intp)
    rows = [ident]
    index = {ident.tobytes(): 0}
    queue = deque([ident])
    complete = True
    while queue and complete:
        cur = queue.popleft()
        for g in gens:
            nxt = g[cur]
            key = nxt.tobytes()
            if key not in index:
                if len(rows) >= cap:
                    complete = False
                    break
                index[key] = len(rows)
                rows.append(nxt)
                queue.append(nxt)
    elements = np.array(rows, dtype=np.intp).reshape(len(rows), n)
    return PermGroup(n, list(generators), elements, complete, cap, index)


def left_translations(t) -> list[Permutation]:
    return [Permutation(t.table[x], check=False) for x in range(t.n)]


def right_translations(t) -> list[Permutation]:
    return [Permutation(t.table[:, x], check=False) for x in range(t.n)]


def mlt_groups(t, which: str = "left", cap: int = DEFAULT_CAP) -> PermGroup:
    """Left multiplication group (``which='left'``) or full multiplication group."""
    gens = left_translations(t)
    if which == "full":
        gens = gens + right_translations(t)
    elif which != "left":
        raise LoopInputError(f"unknown multiplication group {which!r}")
    return closure(gens, cap=cap, n=t.n)


def inner_mapping_blocks(t) -> Iterator[tuple[str, int, np.ndarray]]:
    """Yield the standard inner-mapping generators in blocks of image arrays.

    Each block is ``(family, x, arr)`` where ``arr[y]`` is ``L_{x,y}`` or
    ``R_{x,y}`` (for all ``y``), or, for family ``T``, ``arr[x]`` is ``T_x``.
    """
    T = t.table
    ld = t.ldiv_table
    rd = t.rdiv_table
    n = t.n
    for x in range(n):
        # L_{x,y}: z -> (yx) \ (y(xz))
        yx = T[:, x]
        arr = ld[yx[:, None], T[:, T[x]]]
        yield "L", x, arr
    for x in range(n):
        # R_{x,y}: z -> ((zx)y) / (xy)
        xy = T[x]
        arr = rd[T[T[:, x][None, :], np.arange(n)[:, None]], xy[:, None]]
        yield "R", x, arr
    # T_x: z -> x \ (zx)
    yield "T", -1, ld[np.arange(n)[:, None], T.T]


def inn_generators(t) -> list[Permutation]:
    """All ``L_{x,y}``, ``R_{x,y}`` (row-major in ``x, y``) followed by all ``T_x``."""
    out = []
    for _, _, arr in inner_mapping_blocks(t):
        out.extend(Permutation(row, check=False) for row in arr)
    return out


def is_twisted_subset(ambient, subset: Iterable) -> Report:
    """Twisted-subgroup test: contains 1, closed under inverse and ``(x, y) -> xyx``.

    ``ambient`` is either an associative :class:`CayleyTable` (subset given
    as element indices) or a :class:`PermGroup` (subset given as permutations).
    """
    if isinstance(ambient, PermGroup):
        return _twisted_in_perm_group(ambient, list(subset))
    from .table import is_associative

    if not is_associative(ambient):
        raise PreconditionError("ambient structure is not associative")
    T = ambient.table
    inv = ambient.inverses
    S = np.array(sorted(set(int(s) for s in subset)), dtype=np.intp)
    mask = np.zeros(ambient.n, dtype=bool)
    mask[S] = True
    details = {"size": len(S)}
    if not mask[0]:
        return Report("twisted-subset", False, details={**details, "violation": "identity"})
    bad = ~mask[inv[S]]
    if bad.any():
        x = int(S[np.argmax(bad)])
        return Report("twisted-subset", False, {"x": x}, {**details, "violation": "inverse"})
    xyx = T[T[S[:, None], S[None, :]], S[:, None]]
    bad = ~mask[xyx]
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return Report("twisted-subset", False, {"x": int(S[i]), "y": int(S[j])},
                      {**details, "violation": "xyx"})
    return Report("twisted-subset", True, details=details)


def _twisted_in_perm_group(group: PermGroup, subset: list[Permutation]) -> Report:
    keys = {p.images.tobytes() for p in subset}
    details = {"size": len(keys)}
    if np.arange(group.n).tobytes() not in keys:
        return Report("twisted-subset", False, details={**details, "violation": "identity"})
    for i, p in enumerate(subset):
        if p.inverse().images.tobytes() not in keys:
            return Report("twisted-subset", False, {"x": i}, {**details, "violation": "inverse"})
    for i, p in enumerate(subset):
        for j, q in enumerate(subset):
            if (p * q * p).images.tobytes() not in keys:
                return Report("twisted-subset", False, {"x": i, "y": j},
                              {**details, "violation": "xyx"})
    return Report("twisted-subset", True, details=details)


def require_complete(group: PermGroup) -> PermGroup:
    if not group.complete:
        raise ClosureIncomplete(f"closure exceeded cap of {group.cap} elements")
    return group
