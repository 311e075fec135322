"""Deterministic pass/fail reports shared by the checking operations.

A report is an ordered list of named checks.  Rendering is stable: the same
inputs always produce byte-identical text, so reports can be diffed and used
as golden files.
"""

from __future__ import annotations

from dataclasses import dataclass, field

STATUS_OK = "ok"
STATUS_PRECONDITION = "precondition-failed"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    details: tuple[str, ...] = ()


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    status: str = STATUS_OK

    def add(self, name: str, passed: bool, details: tuple[str, ...] | list[str] = ()) -> None:
        self.checks.append(Check(name, passed, tuple(details)))

    @property
    def passed(self) -> bool:
        return self.status == STATUS_OK and all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = [f"== {self.title}: {'PASS' if self.passed else 'FAIL'}"]
        if self.status != STATUS_OK:
            lines.append(f"   status: {self.status}")
        for check in self.checks:
            lines.append(f"   {'PASS' if check.passed else 'FAIL'}  {check.name}")
            for detail in check.details:
                lines.append(f"         {detail}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "status": self.status,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "details": list(c.details),
                }
                for c in self.checks
            ],
        }
