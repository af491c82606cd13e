"""Bounded well-formedness checking over abstract traces.

Decides the five properties (vacuous conflict, situational conflict,
redundancy, restrictiveness, insufficiency) by exhaustive goal-directed
search: event occurrences are introduced only as rule/pattern activations or
obligation fulfillments, timestamps are restricted to a canonical set derived
from the deadlines, and measure values are branched lazily on first read.
Unread measures cannot influence any verdict (valuation irrelevance), so the
search is exhaustive over the abstract space up to the bounds; the node
budget is the only other source of incompleteness and is reported as such.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .ast import (
    And,
    BooleanType,
    BoolLit,
    CmpOp,
    Comparison,
    Condition,
    Document,
    IntLit,
    Name,
    Not,
    NumericType,
    Or,
    Polarity,
    Response,
    Rule,
    ScaleType,
    TracePattern,
    response_chain,
    rule_responses,
)
from .sema import NameKind, SymbolTable
from .semantics import (
    Trace,
    TracePoint,
    Value,
    deadline_seconds,
    prefix_feasible,
    raises,
    rule_ok,
    satisfies,
    total_valuation,
    trigger_holds,
)


class EngineError(Exception):
    """Internal invariant violation: a produced witness failed re-validation."""


class BudgetExhausted(Exception):
    pass


class UnsupportedDocument(Exception):
    """The document falls outside the abstract domain (e.g. a numeric measure
    compared against another measure)."""


class Property(enum.Enum):
    VACUOUS = "vacuous"
    SITUATIONAL = "situational"
    REDUNDANT = "redundant"
    RESTRICTIVE = "restrictive"
    INSUFFICIENT = "insufficient"


class Status(enum.Enum):
    ISSUE_FOUND = "IssueFound"
    NO_ISSUE = "NoIssueWithinBounds"


@dataclass(frozen=True)
class Bounds:
    max_points: int
    horizon: int
    node_budget: int = 10**6

    def __post_init__(self) -> None:
        if self.max_points < 1 or self.horizon < 1 or self.node_budget < 1:
            raise ValueError("bounds must be positive")

    @staticmethod
    def default_for(document: Document, table: SymbolTable) -> "Bounds":
        deadlines = _all_deadlines(document, table)
        longest = max(deadlines, default=0)
        return Bounds(
            max_points=2 * max(len(document.rules), 1) + 2,
            horizon=2 * longest + 1,
        )

    def to_json(self) -> dict:
        return {
            "max_points": self.max_points,
            "horizon": self.horizon,
            "node_budget": self.node_budget,
        }


def _all_deadlines(document: Document, table: SymbolTable) -> set[int]:
    out: set[int] = set()
    for rule in document.rules:
        for resp in rule_responses(rule):
            out.add(deadline_seconds(resp, table))
    for pat in (*document.concerns, *document.purposes):
        for resp in response_chain(pat.pattern):
            out.add(deadline_seconds(resp, table))
    return {d for d in out if d > 0}


# --- abstract domain ------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: int | None  # None: unbounded below
    hi: int | None  # None: unbounded above
    rep: int

    def contains(self, v: int) -> bool:
        return (self.lo is None or v >= self.lo) and (self.hi is None or v <= self.hi)


class AbstractDomain:
    """Finite value candidates per measure.

    Booleans and scales are exact; numeric measures collapse to the intervals
    induced by the constants they are compared against, each carried by a
    representative value.
    """

    def __init__(self, values: dict[str, list[Value]], intervals: dict[str, list[Interval]]):
        self.values = values
        self.intervals = intervals

    def values_for(self, measure: str) -> list[Value]:
        return self.values[measure]

    @staticmethod
    def build(document: Document, table: SymbolTable) -> "AbstractDomain":
        breakpoints: dict[str, set[int]] = {
            m: set()
            for m, d in table.measures.items()
            if isinstance(d.mtype, NumericType)
        }

        def scan(cond: Condition | None) -> None:
            if cond is None:
                return
            if isinstance(cond, Not):
                scan(cond.operand)
            elif isinstance(cond, (And, Or)):
                scan(cond.left)
                scan(cond.right)
            elif isinstance(cond, Comparison):
                sides = (cond.lhs, cond.rhs)
                numeric_measures = [
                    s.name
                    for s in sides
                    if isinstance(s, Name) and s.name in breakpoints
                ]
                if len(numeric_measures) == 2:
                    raise UnsupportedDocument(
                        f"comparison between numeric measures "
                        f"{numeric_measures[0]!r} and {numeric_measures[1]!r} is outside "
                        "the interval abstraction"
                    )
                if len(numeric_measures) == 1:
                    other = sides[1] if isinstance(sides[0], Name) and sides[0].name == numeric_measures[0] else sides[0]
                    value: int | None = None
                    if isinstance(other, IntLit):
                        value = other.value
                    elif isinstance(other, Name) and table.classify(other.name) is NameKind.CONSTANT:
                        value = table.constants[other.name]
                    if value is not None:
                        breakpoints[numeric_measures[0]].add(value)

        for rule in document.rules:
            scan(rule.trigger.condition)
            for d in rule.defeaters:
                scan(d.condition)
        for pat in (*document.concerns, *document.purposes):
            scan(pat.trigger.condition)

        values: dict[str, list[Value]] = {}
        intervals: dict[str, list[Interval]] = {}
        for m, d in table.measures.items():
            if isinstance(d.mtype, BooleanType):
                values[m] = [False, True]
            elif isinstance(d.mtype, ScaleType):
                values[m] = list(range(len(d.mtype.labels)))
            else:
                cuts = sorted(breakpoints[m])
                ivs: list[Interval] = []
                if not cuts:
                    ivs.append(Interval(None, None, 0))
                else:
                    ivs.append(Interval(None, cuts[0] - 1, cuts[0] - 1))
                    for i, c in enumerate(cuts):
                        ivs.append(Interval(c, c, c))
                        nxt = cuts[i + 1] if i + 1 < len(cuts) else None
                        if nxt is None:
                            ivs.append(Interval(c + 1, None, c + 1))
                        elif c + 1 <= nxt - 1:
                            ivs.append(Interval(c + 1, nxt - 1, c + 1))
                intervals[m] = ivs
                values[m] = [iv.rep for iv in ivs]
        return AbstractDomain(values, intervals)


def canonical_times(deadlines: set[int], bounds: Bounds) -> tuple[int, ...]:
    """Candidate timestamps: sums of deadline values (plus the unit step) of
    bounded length, the origin, and the horizon itself."""
    atoms = sorted(deadlines | {1})
    cap = bounds.max_points + 2
    sums = {0}
    for _ in range(cap):
        new = {s + a for s in sums for a in atoms if s + a <= bounds.horizon}
        if new <= sums:
            break
        sums |= new
    sums.add(bounds.horizon)
    return tuple(sorted(sums))


# --- verdicts ----------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    property: Property
    target: str
    status: Status
    bounds: Bounds
    witness: Trace | None = None
    situation: Trace | None = None
    conflict_set: frozenset[str] | None = None
    budget_exhausted: bool = False

    def to_json(self, table: SymbolTable) -> dict:
        from .semantics import trace_to_json

        out: dict = {
            "property": self.property.value,
            "target": self.target,
            "status": self.status.value,
            "bounds": self.bounds.to_json(),
        }
        if self.witness is not None:
            out["witness"] = trace_to_json(self.witness, table)
        if self.situation is not None:
            out["situation"] = trace_to_json(self.situation, table)
        if self.conflict_set is not None:
            out["conflict_set"] = sorted(self.conflict_set)
        if self.budget_exhausted:
            out["budget_exhausted"] = True
        return out


@dataclass(frozen=True)
class TraceConstraint:
    must_satisfy: tuple[Rule, ...]
    must_trigger: Rule | None = None
    must_raise: TracePattern | None = None
    must_violate: Rule | None = None


# --- search state -------------------------------------------------------------------


@dataclass
class _Point:
    time: int
    events: set[str]
    valuation: dict[str, Value]
    frozen: bool = False  # prefix points admit no new events

    def clone(self) -> "_Point":
        return _Point(self.time, set(self.events), dict(self.valuation), self.frozen)


# A pending obligation: (rule id, chain of (polarity, event, lo, hi)).
_Chain = tuple[tuple[Polarity, str, int, int], ...]


@dataclass
class _State:
    points: list[_Point]
    pending: list[tuple[str, _Chain]]
    zones: list[tuple[str, int, int]]

    def clone(self) -> "_State":
        return _State(
            [p.clone() for p in self.points],
            list(self.pending),
            list(self.zones),
        )

    def point_index(self, t: int) -> int | None:
        for i, p in enumerate(self.points):
            if p.time == t:
                return i
            if p.time > t:
                return None
        return None

    def occurrences(self, event: str) -> list[int]:
        return [p.time for p in self.points if event in p.events]


class _Search:
    """One exhaustive search instance over a fixed rule set and bounds."""

    def __init__(
        self,
        rules: tuple[Rule, ...],
        table: SymbolTable,
        domain: AbstractDomain,
        bounds: Bounds,
        times: tuple[int, ...],
        budget: "_Budget",
        prefix: Trace | None = None,
    ):
        self.rules = rules
        self.table = table
        self.domain = domain
        self.bounds = bounds
        self.times = times
        self.budget = budget
        self.triggered_by: dict[str, list[Rule]] = {}
        for r in rules:
            self.triggered_by.setdefault(r.trigger.event, []).append(r)
        self.min_new_time = -1
        self.initial = _State([], [], [])
        if prefix is not None:
            self.min_new_time = prefix.last_timestamp
            state = self.initial
            for p in prefix.points:
                state.points.append(_Point(p.timestamp, set(p.events), dict(p.valuation), frozen=True))
            seeded = self._seed_concrete(state)
            self.initial = seeded  # type: ignore[assignment]  # may be None: dead prefix

    # --- seeding a concrete prefix -----------------------------------------

    def _seed_concrete(self, state: _State) -> _State | None:
        from .semantics import EffectiveKind, effective_response, make_point

        for i, p in enumerate(state.points):
            point = TracePoint(p.time, frozenset(p.events), p.valuation)
            for rule in self.rules:
                eff = effective_response(rule, point, self.table)
                if eff.kind is EffectiveKind.ACTIVATED:
                    assert eff.response is not None
                    nxt = self._add_obligation(state, rule.id, eff.response, p.time, clone=False)
                    if nxt is None:
                        return None
                    state = nxt
        return state

    # --- budget -----------------------------------------------------------

    def _charge(self) -> None:
        self.budget.charge()

    # --- lazy valuation -----------------------------------------------------

    def _read(self, state: _State, pi: int, measure: str):
        val = state.points[pi].valuation
        if measure in val:
            yield state, val[measure]
            return
        for v in self.domain.values_for(measure):
            self._charge()
            s2 = state.clone()
            s2.points[pi].valuation[measure] = v
            yield s2, v

    def _read_operand(self, state: _State, pi: int, node: Condition):
        if isinstance(node, IntLit):
            yield state, node.value
            return
        if isinstance(node, BoolLit):
            yield state, node.value
            return
        if isinstance(node, Name):
            kind = self.table.classify(node.name)
            if kind is NameKind.MEASURE:
                yield from self._read(state, pi, node.name)
                return
            if kind is NameKind.CONSTANT:
                yield state, self.table.constants[node.name]
                return
            if kind is NameKind.SCALE_LABEL:
                yield state, self.table.scale_labels[node.name][1]
                return
        raise EngineError(f"cannot evaluate operand {node!r}")

    def _eval_bool(self, state: _State, pi: int, cond: Condition | None):
        if cond is None:
            yield state, True
            return
        if isinstance(cond, BoolLit):
            yield state, cond.value
            return
        if isinstance(cond, Not):
            for s, b in self._eval_bool(state, pi, cond.operand):
                yield s, not b
            return
        if isinstance(cond, And):
            for s, b in self._eval_bool(state, pi, cond.left):
                if not b:
                    yield s, False
                else:
                    yield from self._eval_bool(s, pi, cond.right)
            return
        if isinstance(cond, Or):
            for s, b in self._eval_bool(state, pi, cond.left):
                if b:
                    yield s, True
                else:
                    yield from self._eval_bool(s, pi, cond.right)
            return
        if isinstance(cond, Comparison):
            for s1, lhs in self._read_operand(state, pi, cond.lhs):
                for s2, rhs in self._read_operand(s1, pi, cond.rhs):
                    yield s2, _compare(cond.op, lhs, rhs)
            return
        if isinstance(cond, Name):
            for s, v in self._read(state, pi, cond.name):
                yield s, bool(v)
            return
        raise EngineError(f"cannot evaluate condition {cond!r}")

    def _effective(self, state: _State, pi: int, rule: Rule):
        """Yield (state, response | None): the effective response at a point
        whose trigger event is already present; None when not triggered or
        suspended."""

        def scan_defeaters(s: _State, di: int):
            if di < 0:
                yield s, rule.response
                return
            d = rule.defeaters[di]
            for s2, holds in self._eval_bool(s, pi, d.condition):
                if holds:
                    yield s2, d.response  # None means suspended
                else:
                    yield from scan_defeaters(s2, di - 1)

        for s1, triggered in self._eval_bool(state, pi, rule.trigger.condition):
            if not triggered:
                yield s1, None
            else:
                yield from scan_defeaters(s1, len(rule.defeaters) - 1)

    # --- obligations and zones ----------------------------------------------

    def _chain_for(self, resp: Response, t: int) -> _Chain:
        return tuple(
            (r.polarity, r.event, t, t + deadline_seconds(r, self.table))
            for r in response_chain(resp)
        )

    def _zone_ok(self, state: _State, event: str, lo: int, hi: int) -> bool:
        return not any(lo <= t <= hi for t in state.occurrences(event))

    def _add_obligation(
        self, state: _State, rule_id: str, resp: Response, t: int, clone: bool = True
    ) -> _State | None:
        chain = self._chain_for(resp, t)
        if len(chain) == 1 and chain[0][0] is Polarity.FORBID:
            _, event, lo, hi = chain[0]
            if not self._zone_ok(state, event, lo, hi):
                return None
            s = state.clone() if clone else state
            s.zones.append((event, lo, hi))
            return s
        s = state.clone() if clone else state
        s.pending.append((rule_id, chain))
        return s

    # --- event placement -------------------------------------------------------

    def _place_event(self, state: _State, t: int, event: str):
        """Ensure `event` occurs at time t; cascades rule activations."""
        self._charge()
        if event not in self.table.events:
            return
        for zev, lo, hi in state.zones:
            if zev == event and lo <= t <= hi:
                return
        pi = state.point_index(t)
        if pi is not None:
            if event in state.points[pi].events:
                yield state
                return
            if state.points[pi].frozen:
                return
            s = state.clone()
            s.points[pi].events.add(event)
        else:
            if t <= self.min_new_time:
                return
            if len(state.points) >= self.bounds.max_points:
                return
            s = state.clone()
            new_point = _Point(t, {event}, {})
            idx = sum(1 for p in s.points if p.time < t)
            s.points.insert(idx, new_point)
            pi = idx
        yield from self._cascade(s, pi, event)

    def _cascade(self, state: _State, pi: int, event: str):
        rules = self.triggered_by.get(event, [])
        t = state.points[pi].time

        def process(s: _State, idx: int):
            if idx == len(rules):
                yield s
                return
            for s2, resp in self._effective(s, pi, rules[idx]):
                if resp is None:
                    yield from process(s2, idx + 1)
                    continue
                s3 = self._add_obligation(s2, rules[idx].id, resp, t)
                if s3 is None:
                    continue
                yield from process(s3, idx + 1)

        yield from process(state, 0)

    # --- obligation resolution ---------------------------------------------------

    def _placement_times(self, lo: int, hi: int) -> list[int]:
        hi = min(hi, self.bounds.horizon)
        return [t for t in self.times if lo <= t <= hi]

    def _resolve_all(self, state: _State):
        if not state.pending:
            yield state
            return
        self._charge()
        (rule_id, chain) = state.pending[0]
        rest = state.pending[1:]
        for polarity, event, lo, hi in chain:
            base = state.clone()
            base.pending = list(rest)
            if polarity is Polarity.FORBID:
                if self._zone_ok(base, event, lo, hi):
                    base.zones.append((event, lo, hi))
                    yield from self._resolve_all(base)
                continue
            if any(lo <= t <= min(hi, self.bounds.horizon) for t in base.occurrences(event)):
                yield from self._resolve_all(base)
                continue
            for t in self._placement_times(lo, hi):
                for s2 in self._place_event(base, t, event):
                    yield from self._resolve_all(s2)

    # --- goals -----------------------------------------------------------------------

    def _activation_points(self, state: _State, event: str):
        """All states with `event`占 placed at some candidate time, paired with
        the point index."""
        for t in self.times:
            for s in self._place_event(state, t, event):
                pi = s.point_index(t)
                assert pi is not None
                yield s, pi

    def goal_trigger(self, state: _State, rule: Rule):
        """States where the rule's trigger holds at some point (activated or
        suspended)."""
        for s, pi in self._activation_points(state, rule.trigger.event):
            for s2, holds in self._eval_bool(s, pi, rule.trigger.condition):
                if holds:
                    yield s2

    def goal_violate(self, state: _State, rule: Rule):
        """States committed to some activation of `rule` whose effective
        obligation chain fails entirely."""

        def fail_chain(s: _State, chain: _Chain, idx: int):
            if idx == len(chain):
                yield s
                return
            polarity, event, lo, hi = chain[idx]
            if polarity is Polarity.REQUIRE:
                # Must not be fulfilled: ban the event over the whole window.
                hi_eff = min(hi, self.bounds.horizon)
                if not self._zone_ok(s, event, lo, hi_eff):
                    return
                s2 = s.clone()
                s2.zones.append((event, lo, hi_eff))
                yield from fail_chain(s2, chain, idx + 1)
            else:
                # A prohibition fails by an occurrence inside its window.
                if any(lo <= t <= min(hi, self.bounds.horizon) for t in s.occurrences(event)):
                    yield from fail_chain(s, chain, idx + 1)
                    return
                for t in self._placement_times(lo, hi):
                    for s2 in self._place_event(s, t, event):
                        yield from fail_chain(s2, chain, idx + 1)

        for s, pi in self._activation_points(state, rule.trigger.event):
            t = s.points[pi].time
            for s2, resp in self._effective(s, pi, rule):
                if resp is None:
                    continue
                yield from fail_chain(s2, self._chain_for(resp, t), 0)

    def goal_raise(self, state: _State, pattern: TracePattern):
        """States where the pattern triggers at some point and its response is
        observed (require: occurrence in window; forbid: window empty and fully
        inside the horizon)."""
        for s, pi in self._activation_points(state, pattern.trigger.event):
            t = s.points[pi].time
            for s2, holds in self._eval_bool(s, pi, pattern.trigger.condition):
                if not holds:
                    continue
                for polarity, event, lo, hi in self._chain_for(pattern.pattern, t):
                    if polarity is Polarity.FORBID:
                        if hi > self.bounds.horizon:
                            continue  # absence not confirmable inside the bound
                        if not self._zone_ok(s2, event, lo, hi):
                            continue
                        s3 = s2.clone()
                        s3.zones.append((event, lo, hi))
                        yield s3
                    else:
                        if any(lo <= u <= min(hi, self.bounds.horizon) for u in s2.occurrences(event)):
                            yield s2
                            continue
                        for u in self._placement_times(lo, hi):
                            yield from self._place_event(s2, u, event)

    # --- extraction ---------------------------------------------------------------------

    def extract(self, state: _State) -> Trace:
        points = tuple(
            TracePoint(p.time, frozenset(p.events), total_valuation(self.table, p.valuation))
            for p in state.points
        )
        return Trace(points, self.bounds.horizon)

    def feasible_state(self, state: _State) -> bool:
        """Every pending chain still has a live element (mirrors
        semantics.prefix_feasible on the extracted prefix)."""
        last_t = state.points[-1].time if state.points else -1
        has_room = len(state.points) < self.bounds.max_points
        for _rule_id, chain in state.pending:
            alive = False
            for polarity, event, lo, hi in chain:
                occ = [u for u in state.occurrences(event) if lo <= u <= hi]
                if polarity is Polarity.FORBID:
                    if not occ:
                        alive = True
                        break
                else:
                    if occ or (has_room and min(hi, self.bounds.horizon) > last_t):
                        alive = True
                        break
            if not alive:
                return False
        return True


class _Budget:
    def __init__(self, limit: int):
        self.remaining = limit

    def charge(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise BudgetExhausted()


def _compare(op: CmpOp, lhs: Value, rhs: Value) -> bool:
    if op is CmpOp.EQ:
        return lhs == rhs
    if op is CmpOp.NE:
        return lhs != rhs
    if op is CmpOp.LT:
        return lhs < rhs
    if op is CmpOp.LE:
        return lhs <= rhs
    if op is CmpOp.GT:
        return lhs > rhs
    return lhs >= rhs


# --- checker ---------------------------------------------------------------------------


@dataclass
class FindResult:
    trace: Trace | None
    budget_exhausted: bool = False


class Checker:
    """Runs the five well-formedness checks over one analyzed document."""

    def __init__(self, document: Document, table: SymbolTable, bounds: Bounds | None = None):
        self.document = document
        self.table = table
        self.bounds = bounds or Bounds.default_for(document, table)
        self.domain = AbstractDomain.build(document, table)
        self.deadlines = _all_deadlines(document, table)
        self.times = canonical_times(self.deadlines, self.bounds)
        self.rules = document.rules
        self.rules_by_id = {r.id: r for r in self.rules}
        self.patterns_by_id = {p.id: p for p in (*document.concerns, *document.purposes)}

    # --- find_trace -------------------------------------------------------------

    def find_trace(self, constraint: TraceConstraint, budget: _Budget | None = None) -> FindResult:
        budget = budget or _Budget(self.bounds.node_budget)
        search = _Search(
            constraint.must_satisfy, self.table, self.domain, self.bounds, self.times, budget
        )

        def phase_states(states, goal_fn):
            for s in states:
                yield from goal_fn(s)

        states = iter([search.initial])
        if constraint.must_trigger is not None:
            rule = constraint.must_trigger
            states = phase_states(states, lambda s, r=rule: search.goal_trigger(s, r))
        if constraint.must_violate is not None:
            rule = constraint.must_violate
            states = phase_states(states, lambda s, r=rule: search.goal_violate(s, r))
        if constraint.must_raise is not None:
            pat = constraint.must_raise
            states = phase_states(states, lambda s, p=pat: search.goal_raise(s, p))

        try:
            for state in states:
                for solved in search._resolve_all(state):
                    trace = search.extract(solved)
                    self._validate(trace, constraint)
                    return FindResult(trace)
        except BudgetExhausted:
            return FindResult(None, budget_exhausted=True)
        return FindResult(None)

    def _validate(self, trace: Trace, constraint: TraceConstraint) -> None:
        if not satisfies(trace, constraint.must_satisfy, self.table).ok:
            raise EngineError("witness fails rule satisfaction re-validation")
        if constraint.must_trigger is not None and not any(
            trigger_holds(constraint.must_trigger, p, self.table) for p in trace.points
        ):
            raise EngineError("witness does not trigger the requested rule")
        if constraint.must_violate is not None and rule_ok(
            trace, constraint.must_violate, self.table
        ):
            raise EngineError("witness does not violate the requested rule")
        if constraint.must_raise is not None and not raises(
            trace, constraint.must_raise, self.table
        ):
            raise EngineError("witness does not raise the requested pattern")

    # --- property checks -----------------------------------------------------------

    def check_vacuous(self, rule_id: str) -> Verdict:
        rule = self._rule(rule_id)
        res = self.find_trace(TraceConstraint(self.rules, must_trigger=rule))
        if res.trace is not None:
            return Verdict(Property.VACUOUS, rule_id, Status.NO_ISSUE, self.bounds, witness=res.trace)
        return Verdict(
            Property.VACUOUS,
            rule_id,
            Status.NO_ISSUE if res.budget_exhausted else Status.ISSUE_FOUND,
            self.bounds,
            budget_exhausted=res.budget_exhausted,
        )

    def check_redundant(self, rule_id: str) -> Verdict:
        rule = self._rule(rule_id)
        others = tuple(r for r in self.rules if r.id != rule_id)
        res = self.find_trace(TraceConstraint(others, must_violate=rule))
        if res.trace is not None:
            return Verdict(
                Property.REDUNDANT, rule_id, Status.NO_ISSUE, self.bounds, witness=res.trace
            )
        return Verdict(
            Property.REDUNDANT,
            rule_id,
            Status.NO_ISSUE if res.budget_exhausted else Status.ISSUE_FOUND,
            self.bounds,
            budget_exhausted=res.budget_exhausted,
        )

    def check_restrictive(self, purpose_id: str) -> Verdict:
        purpose = self._pattern(purpose_id)
        res = self.find_trace(TraceConstraint(self.rules, must_raise=purpose))
        if res.trace is not None:
            return Verdict(
                Property.RESTRICTIVE, purpose_id, Status.NO_ISSUE, self.bounds, witness=res.trace
            )
        return Verdict(
            Property.RESTRICTIVE,
            purpose_id,
            Status.NO_ISSUE if res.budget_exhausted else Status.ISSUE_FOUND,
            self.bounds,
            budget_exhausted=res.budget_exhausted,
        )

    def check_insufficient(self, concern_id: str) -> Verdict:
        concern = self._pattern(concern_id)
        res = self.find_trace(TraceConstraint(self.rules, must_raise=concern))
        if res.trace is not None:
            return Verdict(
                Property.INSUFFICIENT,
                concern_id,
                Status.ISSUE_FOUND,
                self.bounds,
                witness=res.trace,
            )
        return Verdict(
            Property.INSUFFICIENT,
            concern_id,
            Status.NO_ISSUE,
            self.bounds,
            budget_exhausted=res.budget_exhausted,
        )

    def check_situational(self, rule_id: str) -> Verdict:
        rule = self._rule(rule_id)
        budget = _Budget(self.bounds.node_budget)
        try:
            for situation in self._situations(rule, budget):
                if self._extension_exists(situation, self.rules, budget):
                    continue
                conflict = self._minimize_conflict(situation, budget)
                verdict = Verdict(
                    Property.SITUATIONAL,
                    rule_id,
                    Status.ISSUE_FOUND,
                    self.bounds,
                    situation=situation,
                    conflict_set=frozenset(conflict),
                )
                self._validate_situation(situation, rule)
                return verdict
        except BudgetExhausted:
            return Verdict(
                Property.SITUATIONAL, rule_id, Status.NO_ISSUE, self.bounds, budget_exhausted=True
            )
        return Verdict(Property.SITUATIONAL, rule_id, Status.NO_ISSUE, self.bounds)

    def _validate_situation(self, situation: Trace, rule: Rule) -> None:
        from .semantics import activated_at

        if not any(activated_at(rule, p, self.table) for p in situation.points):
            raise EngineError("situation does not activate the target rule")
        if not prefix_feasible(situation, self.rules, self.table, self.bounds.max_points):
            raise EngineError("situation is not feasible")

    def _situations(self, target: Rule, budget: _Budget):
        """Feasible target-activating trace prefixes, smallest first."""
        relevant = sorted(
            {r.trigger.event for r in self.rules}
            | {resp.event for r in self.rules for resp in rule_responses(r)}
        )
        subsets: list[tuple[str, ...]] = []
        for size in range(1, len(relevant) + 1):
            subsets.extend(itertools.combinations(relevant, size))
        search = _Search(
            self.rules, self.table, self.domain, self.bounds, self.times, budget
        )

        def seed(state: _State, jobs: list[tuple[int, Rule]], activated: bool):
            if not jobs:
                if activated:
                    yield state
                return
            (pi, rule), rest = jobs[0], jobs[1:]
            t = state.points[pi].time
            for s2, resp in search._effective(state, pi, rule):
                if resp is None:
                    yield from seed(s2, rest, activated)
                    continue
                s3 = search._add_obligation(s2, rule.id, resp, t)
                if s3 is None:
                    continue
                yield from seed(s3, rest, activated or rule.id == target.id)

        for k in range(1, self.bounds.max_points + 1):
            for times in itertools.combinations(self.times, k):
                for combo in itertools.product(subsets, repeat=k):
                    if not any(target.trigger.event in evs for evs in combo):
                        continue
                    budget.charge()
                    state = _State(
                        [_Point(t, set(evs), {}, frozen=True) for t, evs in zip(times, combo)],
                        [],
                        [],
                    )
                    jobs = [
                        (pi, rule)
                        for pi, p in enumerate(state.points)
                        for rule in self.rules
                        if rule.trigger.event in p.events
                    ]
                    for seeded in seed(state, jobs, False):
                        if not search.feasible_state(seeded):
                            continue
                        yield search.extract(seeded)

    def _extension_exists(self, situation: Trace, rules: tuple[Rule, ...], budget: _Budget) -> bool:
        search = _Search(
            rules, self.table, self.domain, self.bounds, self.times, budget, prefix=situation
        )
        if search.initial is None:
            return False
        for _solved in search._resolve_all(search.initial):
            return True
        return False

    def _minimize_conflict(self, situation: Trace, budget: _Budget) -> set[str]:
        keep = list(self.rules)
        for rule in list(self.rules):
            if not any(r.id == rule.id for r in keep):
                continue
            trial = tuple(r for r in keep if r.id != rule.id)
            if not self._extension_exists(situation, trial, budget):
                keep = list(trial)
        return {r.id for r in keep}

    # --- dispatch ---------------------------------------------------------------------

    def _rule(self, rule_id: str) -> Rule:
        if rule_id not in self.rules_by_id:
            raise KeyError(f"unknown rule {rule_id!r}")
        return self.rules_by_id[rule_id]

    def _pattern(self, pattern_id: str) -> TracePattern:
        if pattern_id not in self.patterns_by_id:
            raise KeyError(f"unknown concern/purpose {pattern_id!r}")
        return self.patterns_by_id[pattern_id]

    def run(self, prop: Property | str, target: str = "all"):
        """Yield verdicts for a property selector and a target selector."""
        props: list[Property]
        if prop == "all":
            props = list(Property)
        else:
            props = [Property(prop) if isinstance(prop, str) else prop]

        for p in props:
            if p in (Property.VACUOUS, Property.SITUATIONAL, Property.REDUNDANT):
                targets = [r.id for r in self.rules] if target == "all" else [target]
                targets = [t for t in targets if t in self.rules_by_id]
                check = {
                    Property.VACUOUS: self.check_vacuous,
                    Property.SITUATIONAL: self.check_situational,
                    Property.REDUNDANT: self.check_redundant,
                }[p]
                for t in targets:
                    yield check(t)
            elif p is Property.RESTRICTIVE:
                ids = [q.id for q in self.document.purposes]
                targets = ids if target == "all" else [target] if target in ids else []
                for t in targets:
                    yield self.check_restrictive(t)
            else:
                ids = [c.id for c in self.document.concerns]
                targets = ids if target == "all" else [target] if target in ids else []
                for t in targets:
                    yield self.check_insufficient(t)
