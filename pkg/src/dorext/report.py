"""Uniform verdict objects and their deterministic text/structured renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """A named verdict with ordered details.

    ``details`` keeps insertion order, which is what makes rendered reports
    byte-stable: builders always add keys in the same sequence.
    """

    check: str
    passed: bool
    max_degree: int | None = None
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed

    def fail(self, message: str):
        self.passed = False
        self.failures.append(message)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"check": self.check, "passed": self.passed}
        if self.max_degree is not None:
            out["max_degree"] = self.max_degree
        out["details"] = _plain(self.details)
        out["failures"] = list(self.failures)
        return out

    def render_text(self, indent: int = 0) -> str:
        pad = " " * indent
        bound = f" (degree <= {self.max_degree})" if self.max_degree is not None else ""
        lines = [f"{pad}{self.check}: {'PASS' if self.passed else 'FAIL'}{bound}"]
        for k, v in self.details.items():
            lines.extend(_text_lines(k, v, indent + 2))
        for msg in self.failures:
            lines.append(f"{pad}  ! {msg}")
        return "\n".join(lines)


def _plain(value):
    if isinstance(value, Report):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if value is None or isinstance(value, (bool, int, str)):
        return value
    return str(value)


def _text_lines(key, value, indent):
    pad = " " * indent
    if isinstance(value, Report):
        return [f"{pad}{key}:", value.render_text(indent + 2)]
    if isinstance(value, dict):
        out = [f"{pad}{key}:"]
        for k, v in value.items():
            out.extend(_text_lines(k, v, indent + 2))
        return out
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], (dict, Report, list)):
        out = [f"{pad}{key}:"]
        for i, v in enumerate(value):
            out.extend(_text_lines(f"[{i}]", v, indent + 2))
        return out
    if isinstance(value, (list, tuple)):
        return [f"{pad}{key}: [{', '.join(str(v) for v in value)}]"]
    if isinstance(value, bool):
        value = "yes" if value else "no"
    return [f"{pad}{key}: {value}"]


def dump_structured(obj) -> str:
    """Serialize reports (or plain data) as stable, UTF-8 friendly JSON."""
    return json.dumps(_plain(obj), indent=2, ensure_ascii=False) + "\n"


def dump_text(obj) -> str:
    if isinstance(obj, Report):
        return obj.render_text() + "\n"
    if isinstance(obj, (list, tuple)):
        return "".join(dump_text(o) for o in obj)
    if isinstance(obj, dict):
        return "\n".join("\n".join(_text_lines(k, v, 0)) for k, v in obj.items()) + "\n"
    return f"{obj}\n"
