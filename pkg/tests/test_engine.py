import dataclasses

from sleec.engine import (
    AbstractDomain,
    Bounds,
    Checker,
    Property,
    Status,
    TraceConstraint,
    UnsupportedDocument,
    canonical_times,
)
from sleec.sema import analyze
from sleec.semantics import (
    Trace,
    activated_at,
    prefix_feasible,
    raises,
    rule_ok,
    satisfies,
    trigger_holds,
)

import pytest


def _analyzed(src):
    analysis = analyze(src)
    assert analysis.ok, [d.message for d in analysis.diagnostics]
    return analysis


def _checker(src, **bounds):
    analysis = _analyzed(src)
    b = Bounds(**bounds) if bounds else None
    return Checker(analysis.document, analysis.table, b), analysis


CONFLICT_PAIR = (
    "def_start event E event F def_end "
    "rule_start "
    "r when E then F within 5 seconds "
    "q when E then not F within 10 seconds "
    "rule_end"
)


def test_find_trace_triggers_r3(checker, corpus):
    r3 = corpus.document.rules[2]
    res = checker.find_trace(TraceConstraint(corpus.document.rules, must_trigger=r3))
    assert res.trace is not None
    trace = res.trace
    assert satisfies(trace, corpus.document.rules, corpus.table).ok
    assert any(trigger_holds(r3, p, corpus.table) for p in trace.points)
    calls = trace.occurrences("CallEmergencyServices")
    alarms = trace.occurrences("SmokeDetecorAlarm")
    assert alarms and calls
    assert any(alarms[0] <= t <= alarms[0] + 300 for t in calls)


def test_find_trace_none_for_jointly_unfulfillable():
    ck, a = _checker(CONFLICT_PAIR)
    r = a.document.rules[0]
    res = ck.find_trace(TraceConstraint(a.document.rules, must_trigger=r))
    assert res.trace is None and not res.budget_exhausted


def test_find_trace_none_for_undeclared_trigger_event(checker, corpus):
    """A trigger outside the document's event domain can never occur."""
    import dataclasses

    from sleec.ast import Trigger

    r3 = corpus.document.rules[2]
    ghost = dataclasses.replace(r3, trigger=Trigger("NeverDeclared", None))
    res = checker.find_trace(TraceConstraint((), must_trigger=ghost))
    assert res.trace is None and not res.budget_exhausted


def test_vacuous_conflicting_windows():
    ck, _ = _checker(CONFLICT_PAIR)
    assert ck.check_vacuous("r").status is Status.ISSUE_FOUND
    assert ck.check_vacuous("q").status is Status.ISSUE_FOUND


def test_vacuous_single_satisfiable_rule():
    ck, _ = _checker(
        "def_start event E event F def_end rule_start r when E then F within 5 seconds rule_end"
    )
    v = ck.check_vacuous("r")
    assert v.status is Status.NO_ISSUE
    assert v.witness is not None


def test_vacuous_corpus_r2(checker):
    v = checker.check_vacuous("r2")
    assert v.status is Status.NO_ISSUE
    assert v.witness is not None


def test_situational_r1_r3_pair(corpus):
    doc = dataclasses.replace(
        corpus.document,
        rules=(corpus.document.rules[0], corpus.document.rules[2]),
        concerns=(),
        purposes=(),
    )
    ck = Checker(doc, corpus.table)
    v = ck.check_situational("r1")
    assert v.status is Status.ISSUE_FOUND
    assert v.conflict_set == {"r1", "r3"}
    point = v.situation.points[0]
    assert {"HumanOnFloor", "SmokeDetecorAlarm"} <= point.events
    assert point.valuation["humanAssents"] is False


def test_situational_single_rule_is_clean():
    ck, _ = _checker(
        "def_start event E event F def_end rule_start r when E then F within 2 seconds rule_end",
        max_points=3,
        horizon=5,
    )
    v = ck.check_situational("r")
    assert v.status is Status.NO_ISSUE
    assert not v.budget_exhausted


def test_situational_corpus_r1(checker, corpus):
    v = checker.check_situational("r1")
    assert v.status is Status.ISSUE_FOUND
    assert v.conflict_set == {"r1", "r3"}
    assert any(
        {"HumanOnFloor", "SmokeDetecorAlarm"} <= p.events
        and p.valuation["humanAssents"] is False
        for p in v.situation.points
    )
    assert prefix_feasible(v.situation, corpus.document.rules, corpus.table)
    r1 = corpus.document.rules[0]
    assert any(activated_at(r1, p, corpus.table) for p in v.situation.points)


def test_redundant_duplicate_rule():
    ck, _ = _checker(
        "def_start event E event F def_end rule_start "
        "a when E then F within 5 seconds "
        "b when E then F within 5 seconds "
        "rule_end"
    )
    assert ck.check_redundant("b").status is Status.ISSUE_FOUND


def test_redundant_implied_by_stricter_deadline():
    ck, _ = _checker(
        "def_start event E event F def_end rule_start "
        "tight when E then F within 10 seconds "
        "loose when E then F within 20 seconds "
        "rule_end"
    )
    assert ck.check_redundant("loose").status is Status.ISSUE_FOUND
    assert ck.check_redundant("tight").status is Status.NO_ISSUE


def test_redundant_corpus_r1_not_redundant(checker, corpus):
    v = checker.check_redundant("r1")
    assert v.status is Status.NO_ISSUE
    assert v.witness is not None
    others = tuple(r for r in corpus.document.rules if r.id != "r1")
    assert satisfies(v.witness, others, corpus.table).ok
    assert not rule_ok(v.witness, corpus.document.rules[0], corpus.table)


def test_restrictive_forbidden_window_covers_required():
    src = (
        "def_start event E event F def_end "
        "rule_start r when E then not F within 100 seconds rule_end "
        "purpose_start p1 when E then F within 50 seconds purpose_end"
    )
    ck, _ = _checker(src)
    assert ck.check_restrictive("p1").status is Status.ISSUE_FOUND


def test_restrictive_empty_rule_set():
    src = (
        "def_start event E event F def_end rule_start rule_end "
        "purpose_start p1 when E then F within 10 seconds purpose_end"
    )
    ck, a = _checker(src)
    v = ck.check_restrictive("p1")
    assert v.status is Status.NO_ISSUE
    assert v.witness is not None
    assert raises(v.witness, a.document.purposes[0], a.table)


def test_restrictive_corpus_with_emergency_purpose(corpus_source):
    src = corpus_source + (
        "\npurpose_start\n"
        "    p1 when SmokeDetecorAlarm then CallEmergencyServices within 300 seconds\n"
        "purpose_end\n"
    )
    ck, a = _checker(src)
    v = ck.check_restrictive("p1")
    assert v.status is Status.NO_ISSUE
    assert v.witness is not None
    assert satisfies(v.witness, a.document.rules, a.table).ok
    assert raises(v.witness, a.document.purposes[0], a.table)


def test_insufficient_corpus_c1(checker, corpus):
    v = checker.check_insufficient("c1")
    assert v.status is Status.ISSUE_FOUND
    trace = v.witness
    assert satisfies(trace, corpus.document.rules, corpus.table).ok
    assert raises(trace, corpus.document.concerns[0], corpus.table)
    alarms = trace.occurrences("SmokeDetecorAlarm")
    calls = trace.occurrences("CallEmergencyServices")
    assert alarms
    assert not any(alarms[0] <= t <= alarms[0] + 60 for t in calls)


def test_insufficient_no_issue_when_rules_forbid_concern():
    src = (
        "def_start event E event G def_end "
        "rule_start r when E then not G within 10 seconds rule_end "
        "concern_start c1 when E then G within 2 seconds concern_end"
    )
    ck, _ = _checker(src)
    assert ck.check_insufficient("c1").status is Status.NO_ISSUE


def test_budget_exhaustion_reported(corpus):
    ck = Checker(corpus.document, corpus.table, Bounds(max_points=10, horizon=1201, node_budget=40))
    v = ck.check_situational("r1")
    assert v.status is Status.NO_ISSUE
    assert v.budget_exhausted


def test_determinism(corpus):
    a = Checker(corpus.document, corpus.table).check_situational("r1")
    b = Checker(corpus.document, corpus.table).check_situational("r1")
    assert a.to_json(corpus.table) == b.to_json(corpus.table)


def test_abstraction_intervals(corpus):
    domain = AbstractDomain.build(corpus.document, corpus.table)
    ivs = domain.intervals["roomTemperature"]
    assert [(iv.lo, iv.hi) for iv in ivs] == [(None, 15), (16, 16), (17, None)]
    reps = domain.values_for("roomTemperature")
    assert reps == [15, 16, 17]
    for iv in ivs:
        assert iv.contains(iv.rep)


def test_abstraction_soundness_sampling(corpus):
    """Swapping a numeric value for another in the same interval never
    changes satisfaction or raising."""
    import random

    from sleec.semantics import make_point

    table = corpus.table
    rules = corpus.document.rules
    c1 = corpus.document.concerns[0]
    domain = AbstractDomain.build(corpus.document, corpus.table)
    rng = random.Random(7)
    base_val = {m: domain.values_for(m)[0] for m in table.measures}
    for _ in range(60):
        temp = rng.choice(domain.values_for("roomTemperature"))
        iv = next(i for i in domain.intervals["roomTemperature"] if i.contains(temp))
        lo = iv.lo if iv.lo is not None else temp - 50
        hi = iv.hi if iv.hi is not None else temp + 50
        other = rng.randint(lo, hi)
        traces = []
        for v in (temp, other):
            val = dict(base_val, roomTemperature=v, userUnderDressed=True)
            traces.append(
                Trace((make_point(0, {"DressingStarted", "SmokeDetecorAlarm"}, val),), 1201)
            )
        assert (
            satisfies(traces[0], rules, table).ok == satisfies(traces[1], rules, table).ok
        )
        assert raises(traces[0], c1, table) == raises(traces[1], c1, table)


def test_measure_to_measure_comparison_rejected():
    src = (
        "def_start event E measure a: numeric measure b: numeric def_end "
        "rule_start r when E and (a < b) then E rule_end"
    )
    analysis = _analyzed(src)
    with pytest.raises(UnsupportedDocument):
        Checker(analysis.document, analysis.table)


def test_canonical_times_cover_small_integers():
    bounds = Bounds(max_points=3, horizon=4)
    times = canonical_times({1, 2}, bounds)
    assert set(times) == {0, 1, 2, 3, 4}
    times2 = canonical_times({2}, Bounds(max_points=2, horizon=4))
    assert {0, 2, 4} <= set(times2)
    assert 4 in times2  # the horizon itself is always a candidate


def test_default_bounds(corpus):
    b = Bounds.default_for(corpus.document, corpus.table)
    assert b.max_points == 2 * 4 + 2
    assert b.horizon == 2 * 600 + 1
    assert b.node_budget == 10**6


def test_run_dispatcher_all(checker):
    verdicts = list(checker.run("all"))
    by_prop = {}
    for v in verdicts:
        by_prop.setdefault(v.property, []).append(v)
    assert len(by_prop[Property.VACUOUS]) == 4
    assert len(by_prop[Property.SITUATIONAL]) == 4
    assert len(by_prop[Property.REDUNDANT]) == 4
    assert len(by_prop[Property.INSUFFICIENT]) == 1
    assert Property.RESTRICTIVE not in by_prop  # corpus declares no purposes
