from hypothesis import given, settings

from sleec.ast import Polarity, Severity, TimeUnit
from sleec.parser import parse
from sleec.printer import pretty_print

from .strategies import documents


def test_corpus_counts(corpus_source):
    result = parse(corpus_source)
    assert result.ok
    doc = result.document
    assert len(doc.definitions) == 17
    assert len(doc.rules) == 4
    assert len(doc.concerns) == 1
    assert len(doc.purposes) == 0


def test_corpus_rule_structure(corpus_source):
    doc = parse(corpus_source).document
    r1 = doc.rules[0]
    assert r1.id == "r1"
    assert r1.trigger.event == "HumanOnFloor"
    assert r1.response.polarity is Polarity.FORBID
    assert r1.response.event == "CallEmergencyServices"
    assert r1.response.deadline.unit is TimeUnit.SECONDS
    r4 = doc.rules[3]
    assert r4.response.deadline.unit is TimeUnit.MINUTES
    c1 = doc.concerns[0]
    assert c1.id == "c1"
    assert c1.pattern.polarity is Polarity.FORBID


def test_assign_token_accepted_and_discarded(verbatim_source, corpus_source):
    with_assign = parse(verbatim_source).document
    without = parse(corpus_source).document
    assert [r.id for r in with_assign.rules] == [r.id for r in without.rules]
    assert with_assign.rules == without.rules  # spans excluded from equality


def test_malformed_trigger_reports_expected_event():
    result = parse("def_start def_end rule_start r1 := when then rule_end")
    errors = [d for d in result.diagnostics if d.severity is Severity.ERROR]
    assert len(errors) == 1
    assert "expected event identifier" in errors[0].message
    # The span points at the offending 'then'.
    assert errors[0].span.start == "def_start def_end rule_start r1 := when ".__len__()


def test_error_recovery_keeps_other_rules():
    source = """
    def_start event A event B def_end
    rule_start
        r1 when A then B
        r2 when then B
        r3 when B then A within 5 seconds
    rule_end
    """
    result = parse(source)
    assert not result.ok
    assert [r.id for r in result.document.rules] == ["r1", "r3"]


def test_round_trip_corpus(corpus_source):
    doc = parse(corpus_source).document
    again = parse(pretty_print(doc))
    assert again.ok
    assert again.document == doc


def test_pretty_print_r3_shape(corpus_source):
    doc = parse(corpus_source).document
    from sleec.printer import print_rule

    assert (
        print_rule(doc.rules[2])
        == "r3 when SmokeDetecorAlarm then CallEmergencyServices within 300 seconds"
    )


def test_empty_document_prints_empty_blocks():
    from sleec.ast import Document

    text = pretty_print(Document())
    assert "def_start" in text and "def_end" in text
    assert "rule_start" in text and "rule_end" in text
    assert parse(text).ok


def test_missing_blocks_reported():
    result = parse("")
    codes = {d.code for d in result.diagnostics}
    assert codes == {"SLEEC-P004"}
    assert len(result.diagnostics) == 2


def test_unknown_character_diagnostic():
    result = parse("def_start @ event A def_end rule_start rule_end")
    assert any(d.code == "SLEEC-P003" for d in result.diagnostics)
    assert [d.name for d in result.document.definitions] == ["A"]


def test_scale_needs_two_labels():
    result = parse("def_start measure m: scale(one) def_end rule_start rule_end")
    assert any(d.code == "SLEEC-P002" for d in result.diagnostics)


def test_span_soundness(corpus_source):
    result = parse(corpus_source)
    for rule in result.document.rules:
        snippet = corpus_source[rule.span.start : rule.span.end]
        assert snippet.startswith(rule.id)
    for d in result.document.definitions:
        assert 0 <= d.span.start <= d.span.end <= len(corpus_source)


@given(documents())
@settings(max_examples=150, deadline=None)
def test_round_trip_generated(doc):
    printed = pretty_print(doc)
    result = parse(printed)
    assert result.ok, [d.message for d in result.diagnostics]
    assert result.document == doc
