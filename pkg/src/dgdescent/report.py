"""Pass/fail reports shared by the checking operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Report:
    """Outcome of a check: ``ok`` plus located failures and certificates."""

    ok: bool = True
    failures: List[Dict[str, Any]] = field(default_factory=list)
    certificates: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def fail(self, **info) -> None:
        self.ok = False
        self.failures.append(info)

    def certify(self, **info) -> None:
        self.certificates.append(info)

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def merge(self, other: "Report", prefix: str | None = None) -> None:
        for f in other.failures:
            self.fail(**({"stage": prefix} if prefix else {}), **f)
        self.certificates.extend(other.certificates)

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "failures": self.failures, "certificates": self.certificates,
                "details": self.details}
