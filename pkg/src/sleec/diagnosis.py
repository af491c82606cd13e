"""Stakeholder-facing diagnoses built from well-formedness verdicts.

Two enhancements over raw verdict dumps: situational-conflict diagnoses show
only the measures present in the triggers or defeaters of the conflicting
rules, and insufficiency diagnoses list the rules sharing events with the
concern while showing only the concern's own measures.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    Document,
    Rule,
    Span,
    TracePattern,
    condition_names,
    response_chain,
    rule_responses,
)
from .engine import Property, Status, Verdict
from .printer import print_condition, print_response
from .sema import SymbolTable
from .semantics import (
    EffectiveKind,
    Trace,
    effective_response,
    prefix_feasible,
    raises,
    satisfies,
    value_to_json,
)


class MalformedVerdict(Exception):
    """The verdict's witness fails re-validation under the trace semantics."""


@dataclass(frozen=True)
class Highlight:
    rule_id: str
    span: Span
    text: str


@dataclass(frozen=True)
class ConflictDiagnosis:
    conflicting_rules: tuple[str, ...]
    highlighted_clauses: tuple[Highlight, ...]
    situation: Trace
    shown_measures: tuple[str, ...]
    raw_measure_count: int


@dataclass(frozen=True)
class InsufficiencyDiagnosis:
    concern_id: str
    witness: Trace
    related_rules: tuple[tuple[str, tuple[str, ...]], ...]  # (rule id, shared events)
    shown_measures: tuple[str, ...]
    raw_measure_count: int


Diagnosis = ConflictDiagnosis | InsufficiencyDiagnosis


def _condition_measures(rule_or_pattern, table: SymbolTable) -> set[str]:
    """Measures occurring syntactically in the trigger condition and, for
    rules, in defeater conditions."""
    names = list(condition_names(rule_or_pattern.trigger.condition))
    if isinstance(rule_or_pattern, Rule):
        for d in rule_or_pattern.defeaters:
            names.extend(condition_names(d.condition))
    return {n.name for n in names if n.name in table.measures}


def build_conflict_diagnosis(
    verdict: Verdict, document: Document, table: SymbolTable
) -> ConflictDiagnosis:
    if verdict.property is not Property.SITUATIONAL or verdict.status is not Status.ISSUE_FOUND:
        raise MalformedVerdict("conflict diagnoses need a situational IssueFound verdict")
    if verdict.situation is None or not verdict.conflict_set:
        raise MalformedVerdict("verdict carries no situation or conflict set")
    rules_by_id = {r.id: r for r in document.rules}
    target = rules_by_id.get(verdict.target)
    if target is None:
        raise MalformedVerdict(f"target {verdict.target!r} is not a rule of the document")
    situation = verdict.situation
    if not any(
        effective_response(target, p, table).kind is EffectiveKind.ACTIVATED
        for p in situation.points
    ):
        raise MalformedVerdict("situation does not activate the target rule")
    if not prefix_feasible(situation, document.rules, table, verdict.bounds.max_points):
        raise MalformedVerdict("situation is not a feasible prefix")

    conflicting = tuple(r.id for r in document.rules if r.id in verdict.conflict_set)
    shown = tuple(
        m
        for m in table.measures
        if any(m in _condition_measures(rules_by_id[rid], table) for rid in conflicting)
    )

    highlights = []
    for rid in conflicting:
        rule = rules_by_id[rid]
        clause_span = rule.response.span
        clause_text = print_response(rule.response)
        for p in situation.points:
            eff = effective_response(rule, p, table)
            if eff.kind is EffectiveKind.ACTIVATED:
                if eff.defeater is not None:
                    clause_span = eff.defeater.span
                    clause_text = f"unless ({print_condition(eff.defeater.condition)})"
                    if eff.defeater.response is not None:
                        clause_text += f" then {print_response(eff.defeater.response)}"
                break
        highlights.append(Highlight(rid, clause_span, clause_text))

    return ConflictDiagnosis(
        conflicting_rules=conflicting,
        highlighted_clauses=tuple(highlights),
        situation=situation,
        shown_measures=shown,
        raw_measure_count=len(table.measures),
    )


def build_insufficiency_diagnosis(
    verdict: Verdict, document: Document, table: SymbolTable
) -> InsufficiencyDiagnosis:
    if verdict.property is not Property.INSUFFICIENT or verdict.status is not Status.ISSUE_FOUND:
        raise MalformedVerdict("insufficiency diagnoses need an insufficient IssueFound verdict")
    if verdict.witness is None:
        raise MalformedVerdict("verdict carries no witness")
    concern = next((c for c in document.concerns if c.id == verdict.target), None)
    if concern is None:
        raise MalformedVerdict(f"target {verdict.target!r} is not a concern of the document")
    witness = verdict.witness
    if not raises(witness, concern, table):
        raise MalformedVerdict("witness does not raise the concern")
    if not satisfies(witness, document.rules, table).ok:
        raise MalformedVerdict("witness does not satisfy the rule set")

    related = tuple(
        (rule.id, tuple(sorted(shared)))
        for rule in document.rules
        if (shared := _rule_events(rule) & _pattern_events(concern))
    )
    shown = tuple(m for m in table.measures if m in _condition_measures(concern, table))
    return InsufficiencyDiagnosis(
        concern_id=concern.id,
        witness=witness,
        related_rules=related,
        shown_measures=shown,
        raw_measure_count=len(table.measures),
    )


def _rule_events(rule: Rule) -> set[str]:
    return {rule.trigger.event} | {resp.event for resp in rule_responses(rule)}


def _pattern_events(pattern: TracePattern) -> set[str]:
    return {pattern.trigger.event} | {r.event for r in response_chain(pattern.pattern)}


# --- rendering ---------------------------------------------------------------------


@dataclass(frozen=True)
class RenderedDiagnosis:
    text: str
    json: dict


def _trace_rows(trace: Trace, table: SymbolTable, measures: list[str]) -> list[str]:
    rows = []
    for p in trace.points:
        cells = [f"events={{{', '.join(sorted(p.events))}}}"]
        cells += [
            f"{m}={_fmt(value_to_json(table, m, p.valuation[m]))}"
            for m in measures
            if m in p.valuation
        ]
        rows.append(f"t={p.timestamp}: " + "; ".join(cells))
    return rows


def _fmt(v: bool | int | str) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _trace_json(trace: Trace, table: SymbolTable, measures: list[str]) -> list[dict]:
    return [
        {
            "t": p.timestamp,
            "events": sorted(p.events),
            "measures": {
                m: value_to_json(table, m, p.valuation[m]) for m in measures if m in p.valuation
            },
        }
        for p in trace.points
    ]


def render(diagnosis: Diagnosis, mode: str, table: SymbolTable) -> RenderedDiagnosis:
    """Render a diagnosis; `mode` is "filtered" (enhanced layout) or "raw"
    (every measure at every point). Events and timestamps are identical in
    both modes."""
    if mode not in ("raw", "filtered"):
        raise ValueError(f"mode must be 'raw' or 'filtered', got {mode!r}")
    all_measures = list(table.measures)

    if isinstance(diagnosis, ConflictDiagnosis):
        shown = list(diagnosis.shown_measures) if mode == "filtered" else all_measures
        lines = [f"Situational conflict involving rules {', '.join(diagnosis.conflicting_rules)}"]
        lines.append("Conflicting clauses:")
        lines += [f"  {h.rule_id}: {h.text}" for h in diagnosis.highlighted_clauses]
        lines.append(
            f"Situation (showing {len(shown)} of {diagnosis.raw_measure_count} measures):"
        )
        lines += [f"  {row}" for row in _trace_rows(diagnosis.situation, table, shown)]
        payload = {
            "type": "conflict",
            "mode": mode,
            "rules": list(diagnosis.conflicting_rules),
            "trace": _trace_json(diagnosis.situation, table, shown),
            "highlights": [
                {"rule": h.rule_id, "start": h.span.start, "end": h.span.end}
                for h in diagnosis.highlighted_clauses
            ],
            "counts": {"shown": len(diagnosis.shown_measures), "total": diagnosis.raw_measure_count},
        }
        return RenderedDiagnosis("\n".join(lines), payload)

    shown = list(diagnosis.shown_measures) if mode == "filtered" else all_measures
    lines = [f"Concern {diagnosis.concern_id} can arise while every rule is respected"]
    lines.append(f"Witness (showing {len(shown)} of {diagnosis.raw_measure_count} measures):")
    lines += [f"  {row}" for row in _trace_rows(diagnosis.witness, table, shown)]
    if diagnosis.related_rules:
        lines.append("Rules sharing events with the concern:")
        lines += [
            f"  {rid} ({', '.join(events)})" for rid, events in diagnosis.related_rules
        ]
    else:
        lines.append("No rule shares events with the concern.")
    payload = {
        "type": "insufficiency",
        "mode": mode,
        "rules": [rid for rid, _ in diagnosis.related_rules],
        "trace": _trace_json(diagnosis.witness, table, shown),
        "related_rules": [
            {"rule": rid, "events": list(events)} for rid, events in diagnosis.related_rules
        ],
        "counts": {"shown": len(diagnosis.shown_measures), "total": diagnosis.raw_measure_count},
    }
    return RenderedDiagnosis("\n".join(lines), payload)
