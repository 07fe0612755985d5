from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Outcome of one check.  A failing verdict should carry a witness."""

    claim: str
    passed: bool
    flags: list[str] = field(default_factory=list)
    witnesses: dict[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "pass": self.passed,
            "flags": list(self.flags),
            "witnesses": _jsonable(self.witnesses),
        }


def _jsonable(x):
    """Plain JSON data with every integer written as a decimal string."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


jsonable = _jsonable
