"""Seeded random instance generator within the brute-force oracle's class.

Used for differential testing of the bounded engine against the oracle and
for property tests. Instances are emitted as SLEEC source text (exercising
the parser on the way in) and always analyze cleanly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ast import (
    And,
    BooleanType,
    BoolLit,
    CmpOp,
    Comparison,
    Condition,
    Deadline,
    Defeater,
    Document,
    EventDef,
    IntLit,
    MeasureDef,
    Name,
    Not,
    Or,
    PatternKind,
    Polarity,
    Response,
    Rule,
    TimeUnit,
    TracePattern,
    Trigger,
)
from .engine import Bounds
from .printer import pretty_print
from .sema import Analysis, analyze

_EVENT_POOL = ("Alert", "Probe", "Act", "Halt")
_MEASURE_POOL = ("ready", "busy", "safe")


@dataclass
class GeneratedInstance:
    seed: int
    source: str
    analysis: Analysis
    bounds: Bounds

    @property
    def rule_ids(self) -> list[str]:
        return [r.id for r in self.analysis.document.rules]

    @property
    def concern_ids(self) -> list[str]:
        return [c.id for c in self.analysis.document.concerns]

    @property
    def purpose_ids(self) -> list[str]:
        return [p.id for p in self.analysis.document.purposes]


def _gen_condition(rng: random.Random, measures: list[str], depth: int = 0) -> Condition:
    if depth >= 2 or rng.random() < 0.55:
        m = Name(rng.choice(measures))
        if rng.random() < 0.25:
            return Comparison(CmpOp.EQ if rng.random() < 0.5 else CmpOp.NE, m, BoolLit(rng.random() < 0.5))
        return Not(m) if rng.random() < 0.4 else m
    left = _gen_condition(rng, measures, depth + 1)
    right = _gen_condition(rng, measures, depth + 1)
    return And(left, right) if rng.random() < 0.5 else Or(left, right)


def _gen_response(rng: random.Random, events: list[str], allow_alternative: bool = True) -> Response:
    polarity = Polarity.REQUIRE if rng.random() < 0.65 else Polarity.FORBID
    deadline = None
    if rng.random() < 0.75:
        deadline = Deadline(IntLit(rng.choice((1, 2))), TimeUnit.SECONDS)
    alternative = None
    if allow_alternative and rng.random() < 0.15:
        alternative = _gen_response(rng, events, allow_alternative=False)
    return Response(polarity, rng.choice(events), deadline, alternative)


def generate_instance(seed: int) -> GeneratedInstance:
    rng = random.Random(seed)
    if rng.random() < 0.2:
        n_events, n_measures, max_points, horizon = 2, 1, 3, 3
    else:
        n_events = rng.choice((2, 3))
        n_measures = rng.choice((1, 2))
        max_points = 2
        horizon = rng.choice((3, 4))
    events = list(_EVENT_POOL[:n_events])
    measures = list(_MEASURE_POOL[:n_measures])

    definitions = [EventDef(e) for e in events]
    definitions += [MeasureDef(m, BooleanType()) for m in measures]

    rules = []
    for i in range(rng.randint(1, 3)):
        condition = _gen_condition(rng, measures) if rng.random() < 0.5 else None
        defeaters = ()
        if rng.random() < 0.3:
            d_resp = _gen_response(rng, events, allow_alternative=False) if rng.random() < 0.5 else None
            defeaters = (Defeater(_gen_condition(rng, measures), d_resp),)
        rules.append(
            Rule(
                f"r{i + 1}",
                Trigger(rng.choice(events), condition),
                _gen_response(rng, events),
                defeaters,
            )
        )

    def gen_pattern(kind: PatternKind, pid: str) -> TracePattern:
        condition = _gen_condition(rng, measures) if rng.random() < 0.5 else None
        return TracePattern(
            kind,
            pid,
            Trigger(rng.choice(events), condition),
            _gen_response(rng, events, allow_alternative=False),
        )

    document = Document(
        definitions=tuple(definitions),
        rules=tuple(rules),
        concerns=(gen_pattern(PatternKind.CONCERN, "c1"),),
        purposes=(gen_pattern(PatternKind.PURPOSE, "p1"),),
    )
    source = pretty_print(document)
    analysis = analyze(source)
    if not analysis.ok:
        raise AssertionError(
            f"generated instance (seed {seed}) does not analyze cleanly: "
            f"{[d.message for d in analysis.diagnostics]}"
        )
    bounds = Bounds(max_points=max_points, horizon=horizon, node_budget=10**6)
    return GeneratedInstance(seed, source, analysis, bounds)
