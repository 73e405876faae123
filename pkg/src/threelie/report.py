"""Structured outcomes of identity checks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable

from .exactla import format_rational


@dataclass(frozen=True)
class Violation:
    identity: str
    indices: tuple
    residual: tuple

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "indices": list(self.indices),
            "residual": [format_rational(x) for x in self.residual],
        }


@dataclass
class Report:
    """Outcome of a check: ``pass``, ``fail`` or ``error``.

    ``details`` lists located failures (empty on pass); ``stats`` counts the
    index tuples inspected per identity.  ``extra`` carries optional
    machine-readable payload (constructed tables, cohomology data, ...).
    """

    outcome: str
    subject: str
    details: list[Violation] = field(default_factory=list)
    stats: dict[str, int] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def __bool__(self) -> bool:
        return self.passed

    @property
    def first(self) -> Violation | None:
        return self.details[0] if self.details else None

    def to_json(self) -> dict:
        out = {
            "outcome": self.outcome,
            "subject": self.subject,
            "details": [v.to_json() for v in self.details],
            "stats": dict(self.stats),
        }
        if self.message:
            out["message"] = self.message
        if self.extra:
            out["extra"] = self.extra
        return out

    def summary(self) -> str:
        checked = sum(self.stats.values())
        line = f"{self.subject}: {self.outcome.upper()} ({checked} tuples checked)"
        if self.message:
            line += f" - {self.message}"
        for v in self.details:
            line += f"\n  {v.identity} fails at {v.indices}: residual {[format_rational(x) for x in v.residual]}"
        return line


def run_checks(subject: str, cases: Iterable[tuple[str, tuple, tuple]], limit: int = 1) -> Report:
    """Evaluate residuals lazily; the check fails on the first nonzero one.

    ``cases`` yields ``(identity, indices, residual)``.  Evaluation stops once
    ``limit`` violations have been recorded.
    """
    stats: Counter = Counter()
    details: list[Violation] = []
    for identity, indices, residual in cases:
        stats[identity] += 1
        if any(x != 0 for x in residual):
            details.append(Violation(identity, tuple(indices), tuple(residual)))
            if len(details) >= limit:
                break
    return Report("fail" if details else "pass", subject, details, dict(stats))


def merge(subject: str, reports: Iterable[Report]) -> Report:
    """Combine reports; fails if any part fails."""
    reports = list(reports)
    stats: Counter = Counter()
    details: list[Violation] = []
    outcome = "pass"
    for r in reports:
        stats.update(r.stats)
        details.extend(r.details)
        if r.outcome == "error":
            outcome = "error"
        elif r.outcome == "fail" and outcome == "pass":
            outcome = "fail"
    return Report(outcome, subject, details, dict(stats))
