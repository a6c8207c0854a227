"""Identity language: terms over variables, ``e``, and ``*``, ``\\``, ``/``.

Precedence: ``*`` binds loosest; ``\\`` and ``/`` bind tighter and share a
level; both levels associate to the left.  So ``x*y\\z`` is ``x*(y\\z)``
and ``x\\y/z`` is ``(x\\y)/z``.  Variables are single letters other than
``e``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .report import VarietyReport

MAX_VARIABLES = 4
OPS = {"*": "mul", "\\": "ldiv", "/": "rdiv"}


class IdentitySyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


@dataclass(frozen=True)
class Term:
    """``kind`` is ``'var'``, ``'e'`` or one of the operator symbols."""

    kind: str
    name: str | None = None
    left: Term | None = None
    right: Term | None = None

    def variables(self) -> set[str]:
        if self.kind == "var":
            return {self.name}
        if self.kind == "e":
            return set()
        return self.left.variables() | self.right.variables()

    def size(self) -> int:
        if self.kind in ("var", "e"):
            return 1
        return 1 + self.left.size() + self.right.size()

    def __str__(self) -> str:
        if self.kind == "var":
            return self.name
        if self.kind == "e":
            return "e"
        return f"{_wrap(self.left)}{self.kind}{_wrap(self.right)}"


def _wrap(t: Term) -> str:
    s = str(t)
    return s if t.kind in ("var", "e") else f"({s})"


Identity = tuple[Term, Term]


def render(identity: Identity) -> str:
    return f"{identity[0]} = {identity[1]}"


def _tokens(text: str) -> Iterator[tuple[str, int]]:
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch in "*\\/()=":
            yield ch, pos
        elif ch.isalpha() and ch.islower() and ch.isascii():
            yield ch, pos
        else:
            raise IdentitySyntaxError(f"unexpected character {ch!r}", text, pos)
    yield "", len(text)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def pos(self) -> int:
        return self.toks[self.i][1]

    def take(self) -> str:
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def fail(self, msg: str):
        raise IdentitySyntaxError(msg, self.text, self.pos())

    def product(self) -> Term:
        node = self.division()
        while self.peek() == "*":
            self.take()
            node = Term("*", left=node, right=self.division())
        return node

    def division(self) -> Term:
        node = self.atom()
        while self.peek() in ("\\", "/"):
            op = self.take()
            node = Term(op, left=node, right=self.atom())
        return node

    def atom(self) -> Term:
        tok = self.peek()
        if tok == "(":
            self.take()
            node = self.product()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return node
        if tok == "e":
            self.take()
            return Term("e")
        if tok and tok.isalpha():
            self.take()
            if self.peek().isalpha():
                self.fail("juxtaposition is not supported; use '*'")
            return Term("var", name=tok)
        self.fail("expected a variable, 'e' or '('" if tok else "unexpected end of input")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    node = p.product()
    if p.peek() != "":
        p.fail(f"unexpected {p.peek()!r}")
    return node


def parse_identity(text: str) -> Identity:
    """Parse ``lhs = rhs``."""
    p = _Parser(text)
    lhs = p.product()
    if p.peek() != "=":
        p.fail("expected '='")
    p.take()
    rhs = p.product()
    if p.peek() != "":
        p.fail(f"unexpected {p.peek()!r}")
    names = lhs.variables() | rhs.variables()
    if len(names) > MAX_VARIABLES:
        raise IdentitySyntaxError(f"at most {MAX_VARIABLES} variables allowed", text, 0)
    return lhs, rhs


def parse_identity_file(text: str) -> list[Identity]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_identity(line))
    return out


def identity_variables(identity: Identity) -> list[str]:
    return sorted(identity[0].variables() | identity[1].variables())


def evaluate_term(term: Term, tables: dict[str, np.ndarray], env: dict[str, np.ndarray | int]):
    """Evaluate ``term`` elementwise; ``tables`` maps ``mul``/``ldiv``/``rdiv`` to arrays."""
    if term.kind == "var":
        return env[term.name]
    if term.kind == "e":
        return 0
    a = evaluate_term(term.left, tables, env)
    b = evaluate_term(term.right, tables, env)
    return tables[OPS[term.kind]][a, b]


def verify_identity(t, identity: Identity | str, chunk_limit: int = 4_000_000) -> VarietyReport:
    """Evaluate both sides over every assignment; report the first violation.

    Assignments are ordered lexicographically by variable name.
    """
    if isinstance(identity, str):
        identity = parse_identity(identity)
    t.require_loop()
    t0 = time.perf_counter()
    names = identity_variables(identity)
    n, k = t.n, len(names)
    tables = {"mul": t.table, "ldiv": t.ldiv_table, "rdiv": t.rdiv_table}
    text = render(identity)

    def scan(fixed: dict[str, int], free: list[str]):
        env: dict[str, np.ndarray | int] = dict(fixed)
        for axis, name in enumerate(free):
            shape = [1] * len(free)
            shape[axis] = n
            env[name] = np.arange(n).reshape(shape)
        lhs = np.asarray(evaluate_term(identity[0], tables, env))
        rhs = np.asarray(evaluate_term(identity[1], tables, env))
        bad = np.broadcast_to(lhs != rhs, (n,) * len(free))
        if bad.any():
            idx = np.argwhere(bad)[0] if free else ()
            return {**fixed, **{nm: int(v) for nm, v in zip(free, idx)}}
        return None

    if k and n ** k > chunk_limit:
        witness = None
        for v in range(n):
            witness = scan({names[0]: v}, names[1:])
            if witness is not None:
                break
    else:
        witness = scan({}, names)
    elapsed = time.perf_counter() - t0
    if witness is None:
        return VarietyReport("identity", True, equation=text, elapsed=elapsed)
    witness = {nm: witness[nm] for nm in names}
    return VarietyReport("identity", False, witness, equation=text, elapsed=elapsed)
