"""Check reports with deterministic text and JSON rendering."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

PASS = "PASS"
FAIL = "FAIL"


@dataclass(frozen=True)
class CheckItem:
    """One named verdict.  A FAIL item always carries a witness."""

    check: str
    passed: bool
    witness: dict[str, Any] | None = None

    def __post_init__(self):
        if not self.passed and not self.witness:
            raise ValueError(f"FAIL item {self.check!r} needs a witness")

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"check": self.check, "verdict": self.verdict}
        if self.witness:
            d["witness"] = self.witness
        return d


@dataclass(frozen=True)
class CheckReport:
    subject: str
    items: tuple[CheckItem, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def overall(self) -> str:
        return PASS if self.passed else FAIL

    def __bool__(self) -> bool:
        return self.passed

    def item(self, check: str) -> CheckItem:
        for it in self.items:
            if it.check == check:
                return it
        raise KeyError(check)

    def verdicts(self) -> dict[str, str]:
        return {it.check: it.verdict for it in self.items}

    @classmethod
    def single(cls, subject: str, check: str, passed: bool, witness=None) -> "CheckReport":
        return cls(subject, (CheckItem(check, passed, witness),))

    @classmethod
    def merge(cls, subject: str, reports: Iterable["CheckReport"]) -> "CheckReport":
        items: list[CheckItem] = []
        for r in reports:
            items.extend(r.items)
        return cls(subject, tuple(items))

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "overall": self.overall,
            "items": [it.to_dict() for it in self.items],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def render(self) -> str:
        lines = [f"report: {self.subject}"]
        for it in self.items:
            line = f"  {it.verdict}  {it.check}"
            if it.witness and not it.passed:
                line += "  " + _render_witness(it.witness)
            lines.append(line)
        lines.append(f"overall: {self.overall}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()


def render_value(value) -> str:
    if isinstance(value, dict):
        return "{" + "; ".join(f"{k}: {render_value(v)}" for k, v in value.items()) + "}"
    if isinstance(value, list):
        if value and all(isinstance(v, int) for v in value):
            return "(" + ",".join(str(v) for v in value) + ")"
        return "[" + ", ".join(render_value(v) for v in value) + "]"
    return str(value)


def _render_witness(witness: dict[str, Any]) -> str:
    return "  ".join(f"{k} {render_value(v)}" for k, v in witness.items())
