"""Semantic analysis for SLEEC documents.

Symbol resolution, type checking and completion support. Diagnostic codes are
stable strings consumed by the CLI, the HTTP service and the workbench.
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
    ConstantDef,
    Diagnostic,
    Document,
    EventDef,
    IntLit,
    MeasureDef,
    Name,
    Not,
    NumericType,
    Or,
    Response,
    Rule,
    ScaleType,
    Severity,
    Span,
    TracePattern,
    Trigger,
    response_chain,
)
from .lexer import Token, TokenKind, tokenize
from .parser import ParseResult, parse

UNDECLARED = "SLEEC-E001"
TYPE_MISMATCH = "SLEEC-E002"
DUPLICATE_DEFINITION = "SLEEC-E003"
NON_POSITIVE_DEADLINE = "SLEEC-E004"
UNKNOWN_SCALE_LABEL = "SLEEC-E005"
CASE_CONVENTION = "SLEEC-W001"

DIAGNOSTIC_CODES = {
    UNDECLARED: "UndeclaredIdentifier",
    TYPE_MISMATCH: "TypeMismatch",
    DUPLICATE_DEFINITION: "DuplicateDefinition",
    NON_POSITIVE_DEADLINE: "NonPositiveDeadline",
    UNKNOWN_SCALE_LABEL: "UnknownScaleLabel",
    CASE_CONVENTION: "CaseConventionViolation",
}


class NameKind(enum.Enum):
    EVENT = "event"
    MEASURE = "measure"
    CONSTANT = "constant"
    SCALE_LABEL = "scale_label"
    UNKNOWN = "unknown"


@dataclass
class SymbolTable:
    events: dict[str, EventDef] = field(default_factory=dict)
    measures: dict[str, MeasureDef] = field(default_factory=dict)
    constants: dict[str, int] = field(default_factory=dict)
    # label -> (owning measure name, ordinal in declaration order)
    scale_labels: dict[str, tuple[str, int]] = field(default_factory=dict)

    def classify(self, name: str) -> NameKind:
        if name in self.measures:
            return NameKind.MEASURE
        if name in self.constants:
            return NameKind.CONSTANT
        if name in self.scale_labels:
            return NameKind.SCALE_LABEL
        if name in self.events:
            return NameKind.EVENT
        return NameKind.UNKNOWN

    def to_json(self) -> dict:
        measures = []
        for m in self.measures.values():
            if isinstance(m.mtype, BooleanType):
                measures.append({"name": m.name, "type": "boolean"})
            elif isinstance(m.mtype, NumericType):
                measures.append({"name": m.name, "type": "numeric"})
            else:
                measures.append({"name": m.name, "type": "scale", "labels": list(m.mtype.labels)})
        return {
            "events": sorted(self.events),
            "measures": measures,
            "constants": [{"name": n, "value": v} for n, v in self.constants.items()],
        }


# --- symbol construction and reference checking ------------------------------


def build_symbols(document: Document) -> tuple[SymbolTable, list[Diagnostic]]:
    table = SymbolTable()
    diags: list[Diagnostic] = []
    defined: dict[str, Span] = {}

    def declare(name: str, span: Span) -> bool:
        if name in defined:
            first = defined[name]
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    f"duplicate definition of {name!r} (first defined at line {first.line})",
                    span,
                    DUPLICATE_DEFINITION,
                )
            )
            return False
        defined[name] = span
        return True

    for d in document.definitions:
        if isinstance(d, EventDef):
            if d.name[0].islower():
                diags.append(
                    Diagnostic(
                        Severity.WARNING,
                        f"event {d.name!r} should be capitalized",
                        d.span,
                        CASE_CONVENTION,
                    )
                )
            if declare(d.name, d.span):
                table.events[d.name] = d
        elif isinstance(d, MeasureDef):
            if d.name[0].isupper():
                diags.append(
                    Diagnostic(
                        Severity.WARNING,
                        f"measure {d.name!r} should start with a lowercase letter",
                        d.span,
                        CASE_CONVENTION,
                    )
                )
            if declare(d.name, d.span):
                table.measures[d.name] = d
                if isinstance(d.mtype, ScaleType):
                    for ordinal, label in enumerate(d.mtype.labels):
                        if declare(label, d.span):
                            table.scale_labels[label] = (d.name, ordinal)
        elif isinstance(d, ConstantDef):
            if declare(d.name, d.span):
                table.constants[d.name] = d.value

    # Rule/concern/purpose ids share a namespace of their own.
    rule_ids: dict[str, Span] = {}
    for item in (*document.rules, *document.concerns, *document.purposes):
        if item.id in rule_ids:
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    f"duplicate rule identifier {item.id!r} "
                    f"(first used at line {rule_ids[item.id].line})",
                    item.span,
                    DUPLICATE_DEFINITION,
                )
            )
        else:
            rule_ids[item.id] = item.span

    diags.extend(_check_references(document, table))
    diags.sort(key=lambda d: (d.span.start, d.code))
    return table, diags


def _check_references(document: Document, table: SymbolTable) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def check_event(name: str, span: Span) -> None:
        kind = table.classify(name)
        if kind is NameKind.EVENT:
            return
        if kind is NameKind.UNKNOWN:
            diags.append(
                Diagnostic(Severity.ERROR, f"undeclared identifier {name!r}", span, UNDECLARED)
            )
        else:
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    f"{name!r} is a {kind.value}, expected an event",
                    span,
                    TYPE_MISMATCH,
                )
            )

    def check_condition(cond: Condition | None) -> None:
        if cond is None:
            return
        if isinstance(cond, Name):
            kind = table.classify(cond.name)
            if kind is NameKind.UNKNOWN:
                diags.append(
                    Diagnostic(
                        Severity.ERROR,
                        f"undeclared identifier {cond.name!r}",
                        cond.span,
                        UNDECLARED,
                    )
                )
            elif kind is NameKind.EVENT:
                diags.append(
                    Diagnostic(
                        Severity.ERROR,
                        f"{cond.name!r} is an event; conditions may only read "
                        "measures, constants and scale labels",
                        cond.span,
                        TYPE_MISMATCH,
                    )
                )
        elif isinstance(cond, Not):
            check_condition(cond.operand)
        elif isinstance(cond, (And, Or)):
            check_condition(cond.left)
            check_condition(cond.right)
        elif isinstance(cond, Comparison):
            check_condition(cond.lhs)
            check_condition(cond.rhs)

    def check_response(resp: Response) -> None:
        for r in response_chain(resp):
            check_event(r.event, r.event_span)
            if r.deadline is not None and isinstance(r.deadline.amount, Name):
                amount = r.deadline.amount
                kind = table.classify(amount.name)
                if kind is NameKind.UNKNOWN:
                    diags.append(
                        Diagnostic(
                            Severity.ERROR,
                            f"undeclared identifier {amount.name!r}",
                            amount.span,
                            UNDECLARED,
                        )
                    )
                elif kind is not NameKind.CONSTANT:
                    diags.append(
                        Diagnostic(
                            Severity.ERROR,
                            f"deadline amount {amount.name!r} must be a constant",
                            amount.span,
                            TYPE_MISMATCH,
                        )
                    )

    def check_trigger(trigger: Trigger) -> None:
        check_event(trigger.event, trigger.event_span)
        check_condition(trigger.condition)

    for rule in document.rules:
        check_trigger(rule.trigger)
        check_response(rule.response)
        for d in rule.defeaters:
            check_condition(d.condition)
            if d.response is not None:
                check_response(d.response)
    for pat in (*document.concerns, *document.purposes):
        check_trigger(pat.trigger)
        check_response(pat.pattern)

    return diags


# --- type checking -----------------------------------------------------------

_BOOL = ("bool",)
_NUM = ("num",)
_ERROR = ("error",)


def _scale(owner: str) -> tuple:
    return ("scale", owner)


def typecheck(document: Document, table: SymbolTable) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def type_of_atom(cond: Condition) -> tuple:
        if isinstance(cond, IntLit):
            return _NUM
        if isinstance(cond, BoolLit):
            return _BOOL
        if isinstance(cond, Name):
            kind = table.classify(cond.name)
            if kind is NameKind.MEASURE:
                mtype = table.measures[cond.name].mtype
                if isinstance(mtype, BooleanType):
                    return _BOOL
                if isinstance(mtype, NumericType):
                    return _NUM
                return _scale(cond.name)
            if kind is NameKind.CONSTANT:
                return _NUM
            if kind is NameKind.SCALE_LABEL:
                return _scale(table.scale_labels[cond.name][0])
            return _ERROR  # undeclared or event; already reported
        raise TypeError(f"not an atom: {cond!r}")

    def describe(t: tuple) -> str:
        if t == _BOOL:
            return "boolean"
        if t == _NUM:
            return "numeric"
        if t[0] == "scale":
            return f"scale({t[1]})"
        return "unknown"

    def check_comparison(cmp: Comparison) -> tuple:
        lt = type_of_atom(cmp.lhs)
        rt = type_of_atom(cmp.rhs)
        if _ERROR in (lt, rt):
            return _ERROR
        if lt == rt == _NUM:
            return _BOOL
        if lt[0] == "scale" and rt[0] == "scale":
            if lt[1] == rt[1]:
                return _BOOL
            # Point at the side that is a misapplied label, if any.
            for side, ty, other in ((cmp.lhs, lt, rt), (cmp.rhs, rt, lt)):
                if isinstance(side, Name) and table.classify(side.name) is NameKind.SCALE_LABEL:
                    diags.append(
                        Diagnostic(
                            Severity.ERROR,
                            f"{side.name!r} is not a label of scale measure {other[1]!r}",
                            side.span,
                            UNKNOWN_SCALE_LABEL,
                        )
                    )
                    return _ERROR
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    f"cannot compare {describe(lt)} with {describe(rt)}",
                    cmp.span,
                    TYPE_MISMATCH,
                )
            )
            return _ERROR
        if cmp.op in (CmpOp.EQ, CmpOp.NE) and lt == rt == _BOOL:
            return _BOOL
        diags.append(
            Diagnostic(
                Severity.ERROR,
                f"cannot compare {describe(lt)} with {describe(rt)}",
                cmp.span,
                TYPE_MISMATCH,
            )
        )
        return _ERROR

    def check_bool(cond: Condition) -> None:
        if isinstance(cond, (And, Or)):
            check_bool(cond.left)
            check_bool(cond.right)
        elif isinstance(cond, Not):
            check_bool(cond.operand)
        elif isinstance(cond, Comparison):
            check_comparison(cond)
        else:
            t = type_of_atom(cond)
            if t not in (_BOOL, _ERROR):
                diags.append(
                    Diagnostic(
                        Severity.ERROR,
                        f"expected a boolean condition, got {describe(t)}",
                        cond.span,
                        TYPE_MISMATCH,
                    )
                )

    def check_response(resp: Response) -> None:
        for r in response_chain(resp):
            if r.deadline is None:
                continue
            amount = r.deadline.amount
            value: int | None = None
            if isinstance(amount, IntLit):
                value = amount.value
            elif isinstance(amount, Name):
                value = table.constants.get(amount.name)
            if value is not None and value < 1:
                diags.append(
                    Diagnostic(
                        Severity.ERROR,
                        f"deadline must be a positive duration, got {value}",
                        r.deadline.span,
                        NON_POSITIVE_DEADLINE,
                    )
                )

    for rule in document.rules:
        if rule.trigger.condition is not None:
            check_bool(rule.trigger.condition)
        check_response(rule.response)
        for d in rule.defeaters:
            check_bool(d.condition)
            if d.response is not None:
                check_response(d.response)
    for pat in (*document.concerns, *document.purposes):
        if pat.trigger.condition is not None:
            check_bool(pat.trigger.condition)
        check_response(pat.pattern)

    diags.sort(key=lambda d: (d.span.start, d.code))
    return diags


# --- full pipeline ------------------------------------------------------------


@dataclass
class Analysis:
    result: ParseResult
    table: SymbolTable
    diagnostics: list[Diagnostic]  # parse + symbol + type, sorted by span

    @property
    def document(self) -> Document:
        return self.result.document

    @property
    def ok(self) -> bool:
        return not any(d.severity is Severity.ERROR for d in self.diagnostics)


def analyze(source: str) -> Analysis:
    result = parse(source)
    table, sym_diags = build_symbols(result.document)
    type_diags = typecheck(result.document, table)
    diags = sorted(
        [*result.diagnostics, *sym_diags, *type_diags],
        key=lambda d: (d.span.start, d.code),
    )
    return Analysis(result, table, diags)


# --- completions ---------------------------------------------------------------


class CompletionKind(enum.Enum):
    KEYWORD = "keyword"
    SKELETON = "skeleton"
    EVENT = "event"
    MEASURE = "measure"
    CONSTANT = "constant"
    SCALE_LABEL = "scale_label"
    TIME_UNIT = "time_unit"


@dataclass(frozen=True)
class CompletionItem:
    label: str
    kind: CompletionKind
    insert_text: str

    def to_json(self) -> dict:
        return {"label": self.label, "kind": self.kind.value, "insert_text": self.insert_text}


RULE_SKELETON = "ID when EVENT then RESPONSE"
DEF_SKELETON = "def_start\n    \ndef_end"

_CMP_KINDS = frozenset(
    {TokenKind.EQ, TokenKind.NE, TokenKind.LT, TokenKind.LE, TokenKind.GT, TokenKind.GE}
)


def _kw(*words: str) -> list[CompletionItem]:
    return [CompletionItem(w, CompletionKind.KEYWORD, w) for w in words]


def _events(table: SymbolTable) -> list[CompletionItem]:
    return [CompletionItem(n, CompletionKind.EVENT, n) for n in table.events]


def _condition_items(table: SymbolTable) -> list[CompletionItem]:
    items = [CompletionItem(n, CompletionKind.MEASURE, n) for n in table.measures]
    items += [CompletionItem(n, CompletionKind.CONSTANT, n) for n in table.constants]
    items += [CompletionItem(n, CompletionKind.SCALE_LABEL, n) for n in table.scale_labels]
    items += _kw("not", "true", "false")
    return items


def _time_units() -> list[CompletionItem]:
    return [CompletionItem(u, CompletionKind.TIME_UNIT, u) for u in ("seconds", "minutes", "hours", "days")]


def _enclosing_block(before: list[Token]) -> str | None:
    for tok in reversed(before):
        if tok.kind is TokenKind.KEYWORD:
            if tok.lexeme in ("def_start", "rule_start", "concern_start", "purpose_start"):
                return tok.lexeme
            if tok.lexeme in ("def_end", "rule_end", "concern_end", "purpose_end"):
                return None
    return None


def completions(source: str, offset: int) -> list[CompletionItem]:
    """Completion items for the grammar position at a byte offset."""
    offset = max(0, min(offset, len(source)))
    analysis = analyze(source)
    table = analysis.table
    tokens = [t for t in tokenize(source) if t.kind is not TokenKind.ERROR]
    before = [t for t in tokens if t.span.end <= offset]

    if not before:
        return [
            CompletionItem("def_start", CompletionKind.SKELETON, DEF_SKELETON),
            *_kw("def_start", "rule_start", "concern_start", "purpose_start"),
        ]

    last = before[-1]
    prev = before[-2] if len(before) >= 2 else None

    if last.is_kw("when"):
        return _events(table)
    if last.is_kw("then") or last.is_kw("otherwise"):
        return _events(table) + _kw("not")
    if last.is_kw("not"):
        if prev is not None and (prev.is_kw("then") or prev.is_kw("otherwise")):
            return _events(table)
        return _condition_items(table)
    if last.is_kw("within"):
        return [CompletionItem(n, CompletionKind.CONSTANT, n) for n in table.constants]
    if last.kind is TokenKind.INT and prev is not None and prev.is_kw("within"):
        return _time_units()
    if (
        last.is_kw("and")
        or last.is_kw("or")
        or last.is_kw("unless")
        or last.kind in _CMP_KINDS
        or last.kind is TokenKind.LPAREN
    ):
        return _condition_items(table) + _kw("and", "or")
    if last.is_kw("event") or last.is_kw("measure") or last.is_kw("constant"):
        return []  # a fresh name goes here
    if last.kind is TokenKind.COLON:
        return _kw("boolean", "numeric", "scale")
    if last.is_kw("def_start"):
        return _kw("event", "measure", "constant", "def_end")
    if last.is_kw("rule_start") or last.is_kw("concern_start") or last.is_kw("purpose_start"):
        marker = last.lexeme.replace("_start", "_end")
        return [
            CompletionItem(RULE_SKELETON, CompletionKind.SKELETON, RULE_SKELETON),
            *_kw(marker),
        ]
    if last.kind is TokenKind.KEYWORD and last.lexeme in (
        "def_end",
        "rule_end",
        "concern_end",
        "purpose_end",
    ):
        return _kw("rule_start", "concern_start", "purpose_start")

    block = _enclosing_block(before)
    if block == "def_start":
        return _kw("event", "measure", "constant", "def_end")
    if block in ("rule_start", "concern_start", "purpose_start"):
        # After a complete construct inside a rule-like block.
        marker = block.replace("_start", "_end")
        return [
            CompletionItem(RULE_SKELETON, CompletionKind.SKELETON, RULE_SKELETON),
            *_kw("unless", "otherwise", "within", "and", "or", marker),
        ]
    return _kw("def_start", "rule_start", "concern_start", "purpose_start")
