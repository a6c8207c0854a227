"""Pass/fail reports rendered as line-oriented ``key=value`` text."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


def _render_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return ",".join(_render_value(v) for v in items)
    if isinstance(value, dict):
        return ",".join(f"{k}:{_render_value(v)}" for k, v in value.items())
    return str(value)


@dataclass
class Report:
    """Outcome of a checker.

    ``witness`` holds the first counterexample (variable name -> element)
    when ``passed`` is false and a counterexample exists.
    """

    name: str
    passed: bool
    witness: dict[str, int] | None = None
    details: dict[str, Any] = field(default_factory=dict)
    error: str | None = None

    def __bool__(self) -> bool:
        return self.passed

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "pass" if self.passed else "fail"

    def lines(self, prefix: str = "") -> list[str]:
        out = [f"{prefix}status={self.status}", f"{prefix}check={self.name}"]
        if self.error is not None:
            out.append(f"{prefix}error={self.error}")
        if self.witness:
            out.append(f"{prefix}witness={_render_value(self.witness)}")
        for key, value in self.details.items():
            out.append(f"{prefix}{key}={_render_value(value)}")
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


@dataclass
class VarietyReport(Report):
    """Report of an exhaustive axiom scan; ``equation`` is the violated identity."""

    equation: str | None = None
    elapsed: float = 0.0

    def lines(self, prefix: str = "") -> list[str]:
        out = super().lines(prefix)
        if not self.passed and self.equation:
            out.insert(2, f"{prefix}equation={self.equation}")
        return out


def render_many(reports: list[Report], overall_name: str = "all") -> str:
    """Render several reports under one overall status line."""
    if any(r.error is not None for r in reports):
        status = "error"
    elif all(r.passed for r in reports):
        status = "pass"
    else:
        status = "fail"
    lines = [f"status={status}", f"check={overall_name}"]
    for r in reports:
        lines.extend(r.lines(prefix=f"{r.name}."))
    return "\n".join(lines) + "\n"
