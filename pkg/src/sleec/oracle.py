"""Brute-force reference checker for the five well-formedness properties.

Decides each property by literally enumerating every trace within the bounds
(all increasing timestamp tuples, all event subsets, all boolean valuations)
and applying the trace-semantics definitions. Only viable on tiny instances;
the bounded engine is tested against it. Shares nothing with the engine
beyond the AST and the trace-semantics evaluators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .ast import BooleanType, Document, Rule, TracePattern, response_chain, rule_responses
from .engine import Bounds, Property, Status, Verdict
from .sema import SymbolTable
from .semantics import (
    EffectiveKind,
    Trace,
    TracePoint,
    deadline_seconds,
    effective_response,
    fulfilled,
    obligation_for,
    prefix_feasible,
    raises,
)


@dataclass(frozen=True)
class OracleLimits:
    max_rules: int = 4
    max_events: int = 4
    max_bool_measures: int = 3
    allowed_deadlines: tuple[int, ...] = (1, 2)
    max_points: int = 3
    max_horizon: int = 4
    max_traces: int = 10**7


class InstanceTooLarge(Exception):
    pass


def _check_limits(document: Document, table: SymbolTable, bounds: Bounds, limits: OracleLimits) -> None:
    if len(document.rules) > limits.max_rules:
        raise InstanceTooLarge(f"{len(document.rules)} rules exceed {limits.max_rules}")
    if len(table.events) > limits.max_events:
        raise InstanceTooLarge(f"{len(table.events)} events exceed {limits.max_events}")
    if len(table.measures) > limits.max_bool_measures:
        raise InstanceTooLarge(f"{len(table.measures)} measures exceed {limits.max_bool_measures}")
    for m in table.measures.values():
        if not isinstance(m.mtype, BooleanType):
            raise InstanceTooLarge(f"measure {m.name!r} is not boolean")
    deadlines: set[int] = set()
    for rule in document.rules:
        for resp in rule_responses(rule):
            deadlines.add(deadline_seconds(resp, table))
    for pat in (*document.concerns, *document.purposes):
        for resp in response_chain(pat.pattern):
            deadlines.add(deadline_seconds(resp, table))
    bad = deadlines - {0} - set(limits.allowed_deadlines)
    if bad:
        raise InstanceTooLarge(f"deadlines {sorted(bad)} outside {limits.allowed_deadlines}")
    if bounds.max_points > limits.max_points:
        raise InstanceTooLarge(f"max_points {bounds.max_points} exceeds {limits.max_points}")
    if bounds.horizon > limits.max_horizon:
        raise InstanceTooLarge(f"horizon {bounds.horizon} exceeds {limits.max_horizon}")
    if trace_count(len(table.events), len(table.measures), bounds) > limits.max_traces:
        raise InstanceTooLarge("enumeration space exceeds the class limit")


def trace_count(n_events: int, n_measures: int, bounds: Bounds) -> int:
    """Closed form for the number of enumerated traces."""
    configs = (2**n_events) * (2**n_measures)
    total = 0
    for k in range(0, bounds.max_points + 1):
        total += math.comb(bounds.horizon + 1, k) * configs**k
    return total


def enumerate_traces(table: SymbolTable, bounds: Bounds):
    """Every trace within bounds: increasing timestamps over [0, horizon],
    every event subset and every boolean valuation at each point."""
    events = sorted(table.events)
    measures = sorted(table.measures)
    event_subsets = [frozenset(c) for k in range(len(events) + 1) for c in itertools.combinations(events, k)]
    valuations = [dict(zip(measures, bits)) for bits in itertools.product([False, True], repeat=len(measures))]
    configs = [(e, v) for e in event_subsets for v in valuations]
    instants = range(0, bounds.horizon + 1)
    yield Trace((), bounds.horizon)
    for k in range(1, bounds.max_points + 1):
        for times in itertools.combinations(instants, k):
            for combo in itertools.product(configs, repeat=k):
                points = tuple(
                    TracePoint(t, evs, dict(val)) for t, (evs, val) in zip(times, combo)
                )
                yield Trace(points, bounds.horizon)


def _point_key(p: TracePoint) -> tuple:
    return (p.timestamp, p.events, tuple(sorted(p.valuation.items())))


def _trace_key(points: tuple[TracePoint, ...]) -> tuple:
    return tuple(_point_key(p) for p in points)


class OracleInstance:
    """Shared enumeration for checking several properties of one instance."""

    def __init__(
        self,
        document: Document,
        table: SymbolTable,
        bounds: Bounds,
        limits: OracleLimits = OracleLimits(),
    ):
        _check_limits(document, table, bounds, limits)
        self.document = document
        self.table = table
        self.bounds = bounds
        self.rules = document.rules
        self.traces: list[Trace] = list(enumerate_traces(table, bounds))
        expected = trace_count(len(table.events), len(table.measures), bounds)
        if len(self.traces) != expected:
            raise AssertionError(
                f"enumeration not exhaustive: visited {len(self.traces)}, expected {expected}"
            )
        # Per-rule satisfaction/trigger/activation vectors.
        self.ok: dict[str, list[bool]] = {r.id: [] for r in self.rules}
        self.triggered: dict[str, list[bool]] = {r.id: [] for r in self.rules}
        self.activated: dict[str, list[bool]] = {r.id: [] for r in self.rules}
        for trace in self.traces:
            for rule in self.rules:
                ok, trig, act = self._rule_stats(trace, rule)
                self.ok[rule.id].append(ok)
                self.triggered[rule.id].append(trig)
                self.activated[rule.id].append(act)
        self.ok_all = [
            all(self.ok[r.id][i] for r in self.rules) for i in range(len(self.traces))
        ]
        # Prefix relation: key(points of s) -> indices of traces extending s.
        self.by_prefix: dict[tuple, list[int]] = {}
        for i, trace in enumerate(self.traces):
            for k in range(0, len(trace.points) + 1):
                self.by_prefix.setdefault(_trace_key(trace.points[:k]), []).append(i)

    def _rule_stats(self, trace: Trace, rule: Rule) -> tuple[bool, bool, bool]:
        obligations = []
        triggered = activated = False
        for p in trace.points:
            eff = effective_response(rule, p, self.table)
            if eff.kind is not EffectiveKind.NOT_TRIGGERED:
                triggered = True
            if eff.kind is EffectiveKind.ACTIVATED:
                activated = True
                assert eff.response is not None
                obligations.append(
                    obligation_for(rule.id, eff.response, p.timestamp, self.table)
                )
        ok = all(fulfilled(ob, trace) for ob in obligations)
        return ok, triggered, activated

    def _ok_without(self, rule_id: str) -> list[bool]:
        others = [r.id for r in self.rules if r.id != rule_id]
        return [
            all(self.ok[rid][i] for rid in others) for i in range(len(self.traces))
        ]

    # --- property decisions -------------------------------------------------

    def check_vacuous(self, rule_id: str) -> Verdict:
        self._require_rule(rule_id)
        for i, trace in enumerate(self.traces):
            if self.ok_all[i] and self.triggered[rule_id][i]:
                return self._verdict(Property.VACUOUS, rule_id, Status.NO_ISSUE, witness=trace)
        return self._verdict(Property.VACUOUS, rule_id, Status.ISSUE_FOUND)

    def check_redundant(self, rule_id: str) -> Verdict:
        self._require_rule(rule_id)
        ok_rest = self._ok_without(rule_id)
        for i, trace in enumerate(self.traces):
            if ok_rest[i] and not self.ok[rule_id][i]:
                return self._verdict(Property.REDUNDANT, rule_id, Status.NO_ISSUE, witness=trace)
        return self._verdict(Property.REDUNDANT, rule_id, Status.ISSUE_FOUND)

    def check_situational(self, rule_id: str) -> Verdict:
        self._require_rule(rule_id)
        for i, situation in enumerate(self.traces):
            if not situation.points or not self.activated[rule_id][i]:
                continue
            if not prefix_feasible(situation, self.rules, self.table, self.bounds.max_points):
                continue
            extensions = self.by_prefix[_trace_key(situation.points)]
            if not any(self.ok_all[j] for j in extensions):
                return self._verdict(
                    Property.SITUATIONAL, rule_id, Status.ISSUE_FOUND, situation=situation
                )
        return self._verdict(Property.SITUATIONAL, rule_id, Status.NO_ISSUE)

    def check_restrictive(self, purpose_id: str) -> Verdict:
        purpose = self._pattern(purpose_id)
        for i, trace in enumerate(self.traces):
            if self.ok_all[i] and raises(trace, purpose, self.table):
                return self._verdict(
                    Property.RESTRICTIVE, purpose_id, Status.NO_ISSUE, witness=trace
                )
        return self._verdict(Property.RESTRICTIVE, purpose_id, Status.ISSUE_FOUND)

    def check_insufficient(self, concern_id: str) -> Verdict:
        concern = self._pattern(concern_id)
        for i, trace in enumerate(self.traces):
            if self.ok_all[i] and raises(trace, concern, self.table):
                return self._verdict(
                    Property.INSUFFICIENT, concern_id, Status.ISSUE_FOUND, witness=trace
                )
        return self._verdict(Property.INSUFFICIENT, concern_id, Status.NO_ISSUE)

    # --- plumbing ---------------------------------------------------------------

    def _require_rule(self, rule_id: str) -> None:
        if not any(r.id == rule_id for r in self.rules):
            raise KeyError(f"rule {rule_id!r} is not part of the rule set")

    def _pattern(self, pattern_id: str) -> TracePattern:
        for p in (*self.document.concerns, *self.document.purposes):
            if p.id == pattern_id:
                return p
        raise KeyError(f"unknown concern/purpose {pattern_id!r}")

    def _verdict(
        self,
        prop: Property,
        target: str,
        status: Status,
        witness: Trace | None = None,
        situation: Trace | None = None,
    ) -> Verdict:
        return Verdict(
            prop, target, status, self.bounds, witness=witness, situation=situation
        )


def oracle_check(
    prop: Property | str,
    document: Document,
    table: SymbolTable,
    target: str,
    bounds: Bounds,
    limits: OracleLimits = OracleLimits(),
) -> Verdict:
    """One-shot check; use OracleInstance to amortize the enumeration."""
    prop = Property(prop) if isinstance(prop, str) else prop
    inst = OracleInstance(document, table, bounds, limits)
    return {
        Property.VACUOUS: inst.check_vacuous,
        Property.SITUATIONAL: inst.check_situational,
        Property.REDUNDANT: inst.check_redundant,
        Property.RESTRICTIVE: inst.check_restrictive,
        Property.INSUFFICIENT: inst.check_insufficient,
    }[prop](target)
