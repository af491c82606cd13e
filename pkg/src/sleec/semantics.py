"""Trace semantics for SLEEC rule sets.

Defines traces, obligations, rule satisfaction and concern/purpose raising.
This module is the ground truth every checker (bounded engine and brute-force
oracle alike) is judged against.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .ast import (
    And,
    BooleanType,
    BoolLit,
    CmpOp,
    Comparison,
    Condition,
    IntLit,
    Name,
    Not,
    NumericType,
    Or,
    Polarity,
    Response,
    Rule,
    ScaleType,
    TimeUnit,
    TracePattern,
    Defeater,
    response_chain,
)
from .sema import NameKind, SymbolTable

# A measure value: bool for boolean measures, int for numeric measures,
# ordinal int for scale measures. The symbol table disambiguates.
Value = bool | int


def to_seconds(amount: int, unit: TimeUnit) -> int:
    """Exact conversion of a deadline amount to seconds."""
    if amount < 1:
        raise ValueError(f"deadline amount must be positive, got {amount}")
    return amount * unit.factor


def deadline_seconds(resp: Response, table: SymbolTable) -> int:
    """Folded response deadline in seconds; 0 when absent (immediate)."""
    if resp.deadline is None:
        return 0
    amount = resp.deadline.amount
    if isinstance(amount, IntLit):
        value = amount.value
    elif isinstance(amount, Name):
        if amount.name not in table.constants:
            raise ValueError(f"unknown constant {amount.name!r} in deadline")
        value = table.constants[amount.name]
    else:
        raise TypeError(f"bad deadline amount node: {amount!r}")
    return to_seconds(value, resp.deadline.unit)


@dataclass(frozen=True)
class TracePoint:
    timestamp: int
    events: frozenset[str]
    valuation: dict[str, Value]

    def __post_init__(self) -> None:
        if self.timestamp < 0:
            raise ValueError("timestamps are non-negative")


@dataclass(frozen=True)
class Trace:
    points: tuple[TracePoint, ...]
    horizon: int

    def __post_init__(self) -> None:
        times = [p.timestamp for p in self.points]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"timestamps must be strictly increasing: {times}")
        if times and times[-1] > self.horizon:
            raise ValueError(f"last timestamp {times[-1]} exceeds horizon {self.horizon}")

    @property
    def last_timestamp(self) -> int:
        return self.points[-1].timestamp if self.points else -1

    def occurrences(self, event: str) -> list[int]:
        return [p.timestamp for p in self.points if event in p.events]


def make_point(t: int, events: set[str] | frozenset[str], valuation: dict[str, Value]) -> TracePoint:
    return TracePoint(t, frozenset(events), dict(valuation))


def default_value(table: SymbolTable, measure: str) -> Value:
    mtype = table.measures[measure].mtype
    if isinstance(mtype, BooleanType):
        return False
    if isinstance(mtype, NumericType):
        return 0
    return 0  # lowest scale ordinal


def total_valuation(table: SymbolTable, partial: dict[str, Value] | None = None) -> dict[str, Value]:
    """A valuation over every declared measure, defaulting unset ones."""
    out = {m: default_value(table, m) for m in table.measures}
    if partial:
        out.update(partial)
    return out


def validate_trace(trace: Trace, table: SymbolTable) -> None:
    """Check the trace invariants against a document's declarations."""
    for p in trace.points:
        unknown = p.events - set(table.events)
        if unknown:
            raise ValueError(f"undeclared events in trace: {sorted(unknown)}")
        missing = set(table.measures) - set(p.valuation)
        if missing:
            raise ValueError(f"valuation misses measures: {sorted(missing)}")


# --- condition evaluation -----------------------------------------------------


def eval_condition(cond: Condition, table: SymbolTable, valuation: dict[str, Value]) -> bool:
    def operand(c: Condition) -> Value:
        if isinstance(c, IntLit):
            return c.value
        if isinstance(c, BoolLit):
            return c.value
        if isinstance(c, Name):
            kind = table.classify(c.name)
            if kind is NameKind.MEASURE:
                return valuation[c.name]
            if kind is NameKind.CONSTANT:
                return table.constants[c.name]
            if kind is NameKind.SCALE_LABEL:
                return table.scale_labels[c.name][1]
            raise ValueError(f"cannot evaluate {c.name!r}")
        raise TypeError(f"not an operand: {c!r}")

    if isinstance(cond, Not):
        return not eval_condition(cond.operand, table, valuation)
    if isinstance(cond, And):
        return eval_condition(cond.left, table, valuation) and eval_condition(
            cond.right, table, valuation
        )
    if isinstance(cond, Or):
        return eval_condition(cond.left, table, valuation) or eval_condition(
            cond.right, table, valuation
        )
    if isinstance(cond, Comparison):
        lhs, rhs = operand(cond.lhs), operand(cond.rhs)
        if cond.op is CmpOp.EQ:
            return lhs == rhs
        if cond.op is CmpOp.NE:
            return lhs != rhs
        if cond.op is CmpOp.LT:
            return lhs < rhs
        if cond.op is CmpOp.LE:
            return lhs <= rhs
        if cond.op is CmpOp.GT:
            return lhs > rhs
        return lhs >= rhs
    value = operand(cond)
    if not isinstance(value, bool):
        raise ValueError(f"non-boolean atom used as condition: {cond!r}")
    return value


# --- rule activation ------------------------------------------------------------


class EffectiveKind(enum.Enum):
    NOT_TRIGGERED = "not_triggered"
    SUSPENDED = "suspended"
    ACTIVATED = "activated"


@dataclass(frozen=True)
class Effective:
    kind: EffectiveKind
    response: Response | None = None
    defeater: Defeater | None = None  # set when a defeater supplied the response


def trigger_holds(rule: Rule | TracePattern, point: TracePoint, table: SymbolTable) -> bool:
    trig = rule.trigger
    if trig.event not in point.events:
        return False
    if trig.condition is None:
        return True
    return eval_condition(trig.condition, table, point.valuation)


def effective_response(rule: Rule, point: TracePoint, table: SymbolTable) -> Effective:
    """Resolve a rule at a point: defeaters are scanned last to first and the
    first whose condition holds wins (later exceptions override earlier ones).
    """
    if not trigger_holds(rule, point, table):
        return Effective(EffectiveKind.NOT_TRIGGERED)
    for defeater in reversed(rule.defeaters):
        if eval_condition(defeater.condition, table, point.valuation):
            if defeater.response is None:
                return Effective(EffectiveKind.SUSPENDED)
            return Effective(EffectiveKind.ACTIVATED, defeater.response, defeater)
    return Effective(EffectiveKind.ACTIVATED, rule.response)


def activated_at(rule: Rule, point: TracePoint, table: SymbolTable) -> bool:
    return effective_response(rule, point, table).kind is EffectiveKind.ACTIVATED


# --- obligations ------------------------------------------------------------------


@dataclass(frozen=True)
class Obligation:
    """A requirement or prohibition window created by one rule activation.

    "otherwise" alternatives chain: the obligation is fulfilled when its own
    window condition holds or any alternative's does.
    """

    rule_id: str
    kind: Polarity
    event: str
    t_start: int
    t_end: int
    alternative: "Obligation | None" = None
    response: Response = field(compare=False, repr=False, default=None)  # type: ignore[assignment]

    def window(self) -> tuple[int, int]:
        return (self.t_start, self.t_end)

    def chain(self) -> list["Obligation"]:
        out: list[Obligation] = []
        cur: Obligation | None = self
        while cur is not None:
            out.append(cur)
            cur = cur.alternative
        return out


def obligation_for(rule_id: str, resp: Response, t: int, table: SymbolTable) -> Obligation:
    chain = response_chain(resp)
    ob: Obligation | None = None
    for r in reversed(chain):
        ob = Obligation(
            rule_id,
            r.polarity,
            r.event,
            t,
            t + deadline_seconds(r, table),
            alternative=ob,
            response=r,
        )
    assert ob is not None
    return ob


def obligations(rules: list[Rule] | tuple[Rule, ...], trace: Trace, table: SymbolTable) -> list[Obligation]:
    """One obligation per activated (rule, point) pair, in point order then
    rule order."""
    out: list[Obligation] = []
    for point in trace.points:
        for rule in rules:
            eff = effective_response(rule, point, table)
            if eff.kind is EffectiveKind.ACTIVATED:
                assert eff.response is not None
                out.append(obligation_for(rule.id, eff.response, point.timestamp, table))
    return out


def _element_fulfilled(ob: Obligation, trace: Trace) -> bool:
    occurrences = trace.occurrences(ob.event)
    inside = [t for t in occurrences if ob.t_start <= t <= ob.t_end]
    if ob.kind is Polarity.REQUIRE:
        # Bounded reading: a truncated window must still be served inside the
        # trace for the trace to satisfy.
        return bool(inside)
    return not inside


def fulfilled(ob: Obligation, trace: Trace) -> bool:
    return any(_element_fulfilled(el, trace) for el in ob.chain())


@dataclass(frozen=True)
class Violation:
    obligation: Obligation
    explanation: str


@dataclass(frozen=True)
class SatisfactionResult:
    ok: bool
    first_violation: Violation | None = None


def _explain(ob: Obligation, trace: Trace) -> str:
    if ob.kind is Polarity.REQUIRE:
        return (
            f"{ob.rule_id}: {ob.event} required within [{ob.t_start}, {ob.t_end}] "
            "but never occurred there"
        )
    offending = [t for t in trace.occurrences(ob.event) if ob.t_start <= t <= ob.t_end]
    return (
        f"{ob.rule_id}: {ob.event} forbidden within [{ob.t_start}, {ob.t_end}] "
        f"but occurred at t={offending[0]}"
    )


def satisfies(trace: Trace, rules: list[Rule] | tuple[Rule, ...], table: SymbolTable) -> SatisfactionResult:
    for ob in obligations(rules, trace, table):
        if not fulfilled(ob, trace):
            return SatisfactionResult(False, Violation(ob, _explain(ob, trace)))
    return SatisfactionResult(True)


def rule_ok(trace: Trace, rule: Rule, table: SymbolTable) -> bool:
    return satisfies(trace, [rule], table).ok


# --- concerns and purposes ----------------------------------------------------------


def _element_observed(ob: Obligation, trace: Trace) -> bool:
    if ob.kind is Polarity.REQUIRE:
        return _element_fulfilled(ob, trace)
    # A prohibition is only observable when its whole window fits the bound.
    return ob.t_end <= trace.horizon and _element_fulfilled(ob, trace)


def raises(trace: Trace, pattern: TracePattern, table: SymbolTable) -> bool:
    """True when some point triggers the pattern and its response is observed."""
    for point in trace.points:
        if not trigger_holds(pattern, point, table):
            continue
        ob = obligation_for(pattern.id, pattern.pattern, point.timestamp, table)
        if any(_element_observed(el, trace) for el in ob.chain()):
            return True
    return False


# --- situation feasibility -----------------------------------------------------------


def _element_alive(ob: Obligation, prefix: Trace, max_points: int | None) -> bool:
    """Can this chain element still be fulfilled in some extension of prefix?"""
    if ob.kind is Polarity.FORBID:
        # Absence so far can persist in an extension.
        return _element_fulfilled(ob, prefix)
    if _element_fulfilled(ob, prefix):
        return True
    # Extensions only add strictly later points, capped by the horizon and,
    # when given, by the point budget.
    if max_points is not None and len(prefix.points) >= max_points:
        return False
    return min(ob.t_end, prefix.horizon) > prefix.last_timestamp


def prefix_feasible(
    prefix: Trace,
    rules: list[Rule] | tuple[Rule, ...],
    table: SymbolTable,
    max_points: int | None = None,
) -> bool:
    """No obligation inside the prefix is irrecoverably violated: every
    obligation chain still has a live element (within the point budget, when
    one is given)."""
    for ob in obligations(rules, prefix, table):
        if not any(_element_alive(el, prefix, max_points) for el in ob.chain()):
            return False
    return True


# --- serialization ---------------------------------------------------------------------


def value_to_json(table: SymbolTable, measure: str, value: Value) -> bool | int | str:
    mtype = table.measures[measure].mtype
    if isinstance(mtype, BooleanType):
        return bool(value)
    if isinstance(mtype, NumericType):
        return int(value)
    assert isinstance(mtype, ScaleType)
    return mtype.labels[int(value)]


def value_from_json(table: SymbolTable, measure: str, raw: bool | int | str) -> Value:
    mtype = table.measures[measure].mtype
    if isinstance(mtype, BooleanType):
        if not isinstance(raw, bool):
            raise ValueError(f"{measure}: expected a boolean, got {raw!r}")
        return raw
    if isinstance(mtype, NumericType):
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ValueError(f"{measure}: expected an integer, got {raw!r}")
        return raw
    assert isinstance(mtype, ScaleType)
    if isinstance(raw, str):
        if raw not in mtype.labels:
            raise ValueError(f"{measure}: unknown scale label {raw!r}")
        return mtype.labels.index(raw)
    raise ValueError(f"{measure}: expected a scale label, got {raw!r}")


def trace_to_json(trace: Trace, table: SymbolTable) -> dict:
    return {
        "horizon": trace.horizon,
        "points": [
            {
                "t": p.timestamp,
                "events": sorted(p.events),
                "measures": {
                    m: value_to_json(table, m, v) for m, v in sorted(p.valuation.items())
                },
            }
            for p in trace.points
        ],
    }


def trace_from_json(data: dict, table: SymbolTable) -> Trace:
    points = tuple(
        make_point(
            row["t"],
            set(row.get("events", [])),
            {
                m: value_from_json(table, m, raw)
                for m, raw in row.get("measures", {}).items()
            },
        )
        for row in data["points"]
    )
    return Trace(points, data["horizon"])


def trace_table(trace: Trace, table: SymbolTable, measures: list[str] | None = None) -> list[str]:
    """One text row per point: timestamp, events, then measure assignments.

    `measures` restricts and orders the shown columns; None shows all declared
    measures in declaration order.
    """
    shown = list(table.measures) if measures is None else measures
    rows = []
    for p in trace.points:
        cells = [f"events={{{', '.join(sorted(p.events))}}}"]
        for m in shown:
            if m in p.valuation:
                raw = value_to_json(table, m, p.valuation[m])
                text = ("true" if raw else "false") if isinstance(raw, bool) else str(raw)
                cells.append(f"{m}={text}")
        rows.append(f"t={p.timestamp}: " + "; ".join(cells))
    return rows
