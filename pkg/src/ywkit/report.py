"""Pass/fail records shared by every verification routine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from .algebra import Gen, Poly, RingMatrix, SuperPoly

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class Check:
    name: str
    status: str
    details: dict[str, Any] = field(default_factory=dict)
    counterexample: Any = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "status": self.status,
                               "details": canonical(self.details)}
        if self.counterexample is not None:
            out["counterexample"] = canonical(self.counterexample)
        return out


@dataclass
class Report:
    """Ordered collection of checks; truthy iff every non-skipped check passed."""

    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, counterexample: Any = None, **details: Any) -> Check:
        chk = Check(name, PASS if ok else FAIL, dict(details), None if ok else counterexample)
        self.checks.append(chk)
        return chk

    def skip(self, name: str, reason: str) -> Check:
        chk = Check(name, SKIPPED, {"reason": reason})
        self.checks.append(chk)
        return chk

    def extend(self, other: Report | Iterable[Check], prefix: str = "") -> Report:
        checks = other.checks if isinstance(other, Report) else other
        for c in checks:
            self.checks.append(Check(prefix + c.name, c.status, c.details, c.counterexample))
        return self

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def sorted(self) -> Report:
        return Report(self.suite, sorted(self.checks, key=lambda c: c.name))

    def to_json(self) -> dict[str, Any]:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


def canonical(obj: Any) -> Any:
    """JSON-ready rendering with rationals as "num/den" strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Gen):
        return str(obj)
    if isinstance(obj, SuperPoly):
        return str(obj)
    if isinstance(obj, Poly):
        return {",".join(map(str, e)): canonical(c) for e, c in sorted(obj.terms.items())}
    if isinstance(obj, RingMatrix):
        return {"dim": obj.dim,
                "entries": [[r, c, canonical(v)] for (r, c), v in sorted(obj.items())]}
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [canonical(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=lambda v: json.dumps(v, sort_keys=True))
        return items
    return str(obj)
