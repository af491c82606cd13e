"""Request-level orchestration shared by the CLI and the HTTP service."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .diagnosis import (
    build_conflict_diagnosis,
    build_insufficiency_diagnosis,
    render,
)
from .engine import Bounds, Checker, Property, Status, UnsupportedDocument, Verdict
from .sema import Analysis, analyze

PROPERTIES = [p.value for p in Property] + ["all"]


class TargetError(Exception):
    """The requested target id does not resolve in the document."""


@dataclass
class CheckOutcome:
    analysis: Analysis
    verdicts: list[dict] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def has_issues(self) -> bool:
        return any(v["status"] == Status.ISSUE_FOUND.value for v in self.verdicts)

    @property
    def has_errors(self) -> bool:
        return not self.analysis.ok

    def to_json(self) -> dict:
        return {
            "diagnostics": [d.to_json() for d in self.analysis.diagnostics],
            "verdicts": self.verdicts,
            "timing": self.timing,
        }


def _serialize_verdict(verdict: Verdict, checker: Checker, mode: str) -> dict:
    table = checker.table
    data = verdict.to_json(table)
    diagnosis = None
    if verdict.status is Status.ISSUE_FOUND:
        if verdict.property is Property.SITUATIONAL:
            diagnosis = build_conflict_diagnosis(verdict, checker.document, table)
        elif verdict.property is Property.INSUFFICIENT:
            diagnosis = build_insufficiency_diagnosis(verdict, checker.document, table)
    if diagnosis is not None:
        raw = render(diagnosis, "raw", table)
        filtered = render(diagnosis, "filtered", table)
        data["diagnosis"] = {
            "raw": raw.json,
            "filtered": filtered.json,
            "text": (filtered if mode == "filtered" else raw).text,
        }
    return data


def execute_check(
    source: str,
    prop: str = "all",
    target: str = "all",
    mode: str = "filtered",
    max_points: int | None = None,
    horizon: int | None = None,
    budget: int | None = None,
) -> CheckOutcome:
    """Analyze the source and, when it is error-free, run the requested
    checks. Verdicts are only produced for documents without Error
    diagnostics."""
    if prop not in PROPERTIES:
        raise TargetError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    if mode not in ("raw", "filtered"):
        raise TargetError(f"unknown mode {mode!r}; expected 'raw' or 'filtered'")

    analysis = analyze(source)
    outcome = CheckOutcome(analysis)
    if not analysis.ok:
        return outcome

    document = analysis.document
    if target != "all":
        known = {r.id for r in document.rules} | {
            p.id for p in (*document.concerns, *document.purposes)
        }
        if target not in known:
            raise TargetError(f"target {target!r} does not resolve in the document")

    defaults = Bounds.default_for(document, analysis.table)
    bounds = Bounds(
        max_points=max_points or defaults.max_points,
        horizon=horizon or defaults.horizon,
        node_budget=budget or defaults.node_budget,
    )
    checker = Checker(document, analysis.table, bounds)

    t_total = time.perf_counter()
    checks: list[dict] = []
    pending = checker.run(prop, target)
    while True:
        t0 = time.perf_counter()
        verdict = next(pending, None)
        if verdict is None:
            break
        data = _serialize_verdict(verdict, checker, mode)
        checks.append(
            {
                "property": verdict.property.value,
                "target": verdict.target,
                "ms": round((time.perf_counter() - t0) * 1000, 3),
            }
        )
        outcome.verdicts.append(data)
    outcome.timing = {
        "total_ms": round((time.perf_counter() - t_total) * 1000, 3),
        "checks": checks,
    }
    return outcome


__all__ = [
    "CheckOutcome",
    "PROPERTIES",
    "TargetError",
    "UnsupportedDocument",
    "execute_check",
]
