"""Verification reports: named exact checks with residuals."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .forms import Form

IDENTITY = "identity"
NONZERO = "nonzero"
ASSERT = "assert"


def _vanishes(residual) -> bool:
    if isinstance(residual, (list, tuple)):
        return all(_vanishes(r) for r in residual)
    return not residual


def residual_str(residual) -> str:
    if residual is None:
        return ""
    if isinstance(residual, Form):
        return str(residual)
    if isinstance(residual, (list, tuple)):
        parts = [f"[{i}] {residual_str(r)}" for i, r in enumerate(residual, 1) if not _vanishes(r)]
        return "; ".join(parts) if parts else "0"
    return str(residual)


@dataclass(frozen=True)
class Check:
    """One exact check.

    ``identity`` checks pass iff the residual vanishes; ``nonzero`` checks
    record a claim that something does *not* vanish (the residual is the
    witness); ``assert`` checks carry an explicit boolean outcome.
    """

    name: str
    anchor: str
    residual: object = None
    kind: str = IDENTITY
    ok: Optional[bool] = None
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.kind == IDENTITY:
            return _vanishes(self.residual)
        if self.kind == NONZERO:
            return not _vanishes(self.residual)
        return bool(self.ok)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "residual": residual_str(self.residual),
        }
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class VerificationReport:
    example: str
    params: Dict[str, Fraction] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            if prefix:
                c = Check(f"{prefix}{c.name}", c.anchor, c.residual, c.kind, c.ok, c.note)
            self.checks.append(c)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "example": self.example,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    def to_text(self) -> str:
        head = self.example
        if self.params:
            head += " [" + ", ".join(f"{k}={v}" for k, v in sorted(self.params.items())) + "]"
        lines = [head]
        for c in self.checks:
            line = f"  {c.status.upper():4}  {c.name}  ({c.anchor})"
            res = residual_str(c.residual)
            if c.kind == IDENTITY and res and res != "0":
                line += f"\n        residual: {res}"
            elif c.kind == NONZERO:
                line += f"\n        witness: {res}"
            if c.note:
                line += f"\n        note: {c.note}"
            lines.append(line)
        return "\n".join(lines)
