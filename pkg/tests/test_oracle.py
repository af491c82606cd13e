import pytest

from sleec.engine import Bounds, Status
from sleec.oracle import (
    InstanceTooLarge,
    OracleInstance,
    OracleLimits,
    enumerate_traces,
    oracle_check,
    trace_count,
)
from sleec.sema import analyze


def _analyzed(src):
    analysis = analyze(src)
    assert analysis.ok, [d.message for d in analysis.diagnostics]
    return analysis


SCALED_CONFLICT = (
    "def_start event Fall event Smoke event Call measure assents: boolean def_end "
    "rule_start "
    "q1 when Fall and (not assents) then not Call within 2 seconds "
    "q2 when Smoke then Call within 1 seconds "
    "rule_end"
)


def test_enumeration_count_matches_closed_form():
    a = _analyzed("def_start event A event B measure m: boolean def_end rule_start rule_end")
    bounds = Bounds(max_points=2, horizon=3)
    traces = list(enumerate_traces(a.table, bounds))
    assert len(traces) == trace_count(2, 1, bounds)
    assert len(traces) == len({tuple((p.timestamp, p.events, tuple(sorted(p.valuation.items()))) for p in t.points) for t in traces})


def test_scaled_conflict_pattern_is_situational():
    a = _analyzed(SCALED_CONFLICT)
    bounds = Bounds(max_points=2, horizon=3)
    v = oracle_check("situational", a.document, a.table, "q1", bounds)
    assert v.status is Status.ISSUE_FOUND
    assert v.situation is not None


def test_duplicate_rule_redundant_at_class_limits():
    src = (
        "def_start event E event F def_end rule_start "
        "a when E then F within 1 seconds "
        "b when E then F within 1 seconds "
        "rule_end"
    )
    a = _analyzed(src)
    v = oracle_check("redundant", a.document, a.table, "b", Bounds(max_points=2, horizon=2))
    assert v.status is Status.ISSUE_FOUND


def test_unknown_target_is_a_precondition_error():
    a = _analyzed(SCALED_CONFLICT)
    inst = OracleInstance(a.document, a.table, Bounds(max_points=2, horizon=2))
    with pytest.raises(KeyError):
        inst.check_vacuous("nope")


def test_instance_too_large():
    src = (
        "def_start event E def_end rule_start "
        + " ".join(f"x{i} when E then E" for i in range(5))
        + " rule_end"
    )
    a = _analyzed(src)
    with pytest.raises(InstanceTooLarge):
        OracleInstance(a.document, a.table, Bounds(max_points=2, horizon=2))


def test_deadline_outside_class_rejected():
    src = "def_start event E def_end rule_start r when E then E within 9 seconds rule_end"
    a = _analyzed(src)
    with pytest.raises(InstanceTooLarge):
        OracleInstance(a.document, a.table, Bounds(max_points=2, horizon=2))


def test_numeric_measures_outside_class():
    src = "def_start event E measure m: numeric def_end rule_start rule_end"
    a = _analyzed(src)
    with pytest.raises(InstanceTooLarge):
        OracleInstance(a.document, a.table, Bounds(max_points=2, horizon=2))


def test_bounds_beyond_class_rejected():
    a = _analyzed(SCALED_CONFLICT)
    with pytest.raises(InstanceTooLarge):
        OracleInstance(a.document, a.table, Bounds(max_points=4, horizon=3))
    with pytest.raises(InstanceTooLarge):
        OracleInstance(a.document, a.table, Bounds(max_points=2, horizon=9))
    limits = OracleLimits(max_traces=100)
    with pytest.raises(InstanceTooLarge):
        OracleInstance(a.document, a.table, Bounds(max_points=3, horizon=4), limits)


def test_oracle_never_consults_engine():
    import ast as pyast
    from pathlib import Path

    src = Path(__file__).resolve().parents[1] / "src" / "sleec" / "oracle.py"
    tree = pyast.parse(src.read_text())
    imported: set[str] = set()
    for node in pyast.walk(tree):
        if isinstance(node, pyast.ImportFrom) and node.module == "engine":
            imported.update(a.name for a in node.names)
    # Only verdict/bounds value types are shared, never search machinery.
    assert imported <= {"Bounds", "Property", "Status", "Verdict"}
