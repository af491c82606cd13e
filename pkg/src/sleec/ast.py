"""AST node types for the SLEEC DSL.

All nodes carry a source Span. Spans are excluded from equality so that
structural comparison (e.g. after a pretty-print round trip) ignores layout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Span:
    """Half-open byte range [start, end) plus 1-based line/column endpoints."""

    start: int
    end: int
    line: int
    col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"span start {self.start} > end {self.end}")

    @staticmethod
    def point(offset: int, line: int, col: int) -> "Span":
        return Span(offset, offset, line, col, line, col)

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "line": self.line,
            "col": self.col,
            "end_line": self.end_line,
            "end_col": self.end_col,
        }


EMPTY_SPAN = Span(0, 0, 1, 1, 1, 1)


def _span_field() -> Span:
    # Spans never participate in structural equality.
    return field(default=EMPTY_SPAN, compare=False, repr=False)  # type: ignore[return-value]


class TimeUnit(enum.Enum):
    SECONDS = "seconds"
    MINUTES = "minutes"
    HOURS = "hours"
    DAYS = "days"

    @property
    def factor(self) -> int:
        return {"seconds": 1, "minutes": 60, "hours": 3600, "days": 86400}[self.value]


class Polarity(enum.Enum):
    REQUIRE = "require"
    FORBID = "forbid"


class CmpOp(enum.Enum):
    EQ = "="
    NE = "<>"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="


# --- measure types ---------------------------------------------------------


@dataclass(frozen=True)
class BooleanType:
    pass


@dataclass(frozen=True)
class NumericType:
    pass


@dataclass(frozen=True)
class ScaleType:
    labels: tuple[str, ...]


MeasureType = BooleanType | NumericType | ScaleType


# --- conditions ------------------------------------------------------------


@dataclass(frozen=True)
class Name:
    """Identifier atom in a condition: a measure, constant or scale label.

    Which of the three it is cannot be decided syntactically; the symbol
    table classifies it during semantic analysis and evaluation.
    """

    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = _span_field()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Span = _span_field()


@dataclass(frozen=True)
class Not:
    operand: "Condition"
    span: Span = _span_field()


@dataclass(frozen=True)
class And:
    left: "Condition"
    right: "Condition"
    span: Span = _span_field()


@dataclass(frozen=True)
class Or:
    left: "Condition"
    right: "Condition"
    span: Span = _span_field()


@dataclass(frozen=True)
class Comparison:
    op: CmpOp
    lhs: "Condition"
    rhs: "Condition"
    span: Span = _span_field()


Condition = Name | IntLit | BoolLit | Not | And | Or | Comparison


# --- definitions -----------------------------------------------------------


@dataclass(frozen=True)
class EventDef:
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class MeasureDef:
    name: str
    mtype: MeasureType
    span: Span = _span_field()


@dataclass(frozen=True)
class ConstantDef:
    name: str
    value: int
    span: Span = _span_field()


Definition = EventDef | MeasureDef | ConstantDef


# --- rules, concerns, purposes ---------------------------------------------


@dataclass(frozen=True)
class Deadline:
    amount: Condition  # IntLit or Name of a constant
    unit: TimeUnit
    span: Span = _span_field()


@dataclass(frozen=True)
class Response:
    polarity: Polarity
    event: str
    deadline: Deadline | None = None
    alternative: "Response | None" = None  # the "otherwise" branch
    span: Span = _span_field()
    event_span: Span = _span_field()


@dataclass(frozen=True)
class Trigger:
    event: str
    condition: Condition | None = None
    span: Span = _span_field()
    event_span: Span = _span_field()


@dataclass(frozen=True)
class Defeater:
    condition: Condition
    response: Response | None = None  # None: the rule is suspended
    span: Span = _span_field()


@dataclass(frozen=True)
class Rule:
    id: str
    trigger: Trigger
    response: Response
    defeaters: tuple[Defeater, ...] = ()
    span: Span = _span_field()


class PatternKind(enum.Enum):
    CONCERN = "concern"
    PURPOSE = "purpose"


@dataclass(frozen=True)
class TracePattern:
    """A concern (undesired behavior) or purpose (desired behavior).

    Same shape as a rule without defeaters; interpreted existentially over
    traces.
    """

    kind: PatternKind
    id: str
    trigger: Trigger
    pattern: Response
    span: Span = _span_field()


@dataclass(frozen=True)
class Document:
    definitions: tuple[Definition, ...] = ()
    rules: tuple[Rule, ...] = ()
    concerns: tuple[TracePattern, ...] = ()
    purposes: tuple[TracePattern, ...] = ()
    span: Span = _span_field()


# --- diagnostics ------------------------------------------------------------


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """Parse or semantic diagnostic with a stable code and a source span."""

    severity: Severity
    message: str
    span: Span
    code: str

    def to_json(self) -> dict:
        return {
            "severity": self.severity.value,
            "message": self.message,
            "code": self.code,
            "span": self.span.to_json(),
        }


def condition_names(cond: Condition | None) -> list[Name]:
    """All identifier atoms of a condition, in source order."""
    out: list[Name] = []

    def walk(c: Condition) -> None:
        if isinstance(c, Name):
            out.append(c)
        elif isinstance(c, Not):
            walk(c.operand)
        elif isinstance(c, (And, Or)):
            walk(c.left)
            walk(c.right)
        elif isinstance(c, Comparison):
            walk(c.lhs)
            walk(c.rhs)

    if cond is not None:
        walk(cond)
    return out


def response_chain(resp: Response) -> list[Response]:
    """A response followed by its "otherwise" alternatives, in order."""
    out = []
    cur: Response | None = resp
    while cur is not None:
        out.append(cur)
        cur = cur.alternative
    return out


def rule_responses(rule: Rule) -> list[Response]:
    """Every response reachable from a rule: primary, defeater and otherwise."""
    out = list(response_chain(rule.response))
    for d in rule.defeaters:
        if d.response is not None:
            out.extend(response_chain(d.response))
    return out
