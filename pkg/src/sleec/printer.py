"""Canonical pretty-printer for SLEEC documents.

Output re-parses to a structurally equal document (spans aside).
"""

from __future__ import annotations

from .ast import (
    And,
    BooleanType,
    BoolLit,
    Comparison,
    Condition,
    ConstantDef,
    Defeater,
    Document,
    EventDef,
    IntLit,
    MeasureDef,
    Name,
    Not,
    NumericType,
    Or,
    Polarity,
    Response,
    Rule,
    ScaleType,
    TracePattern,
)

_INDENT = "    "

# Precedence: or < and < not; comparisons and leaves are atomic.
_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3
_PREC_ATOM = 4


def print_condition(cond: Condition, ctx: int = _PREC_OR) -> str:
    if isinstance(cond, Or):
        text = f"{print_condition(cond.left, _PREC_OR)} or {print_condition(cond.right, _PREC_OR + 1)}"
        return f"({text})" if ctx > _PREC_OR else text
    if isinstance(cond, And):
        text = f"{print_condition(cond.left, _PREC_AND)} and {print_condition(cond.right, _PREC_AND + 1)}"
        return f"({text})" if ctx > _PREC_AND else text
    if isinstance(cond, Not):
        text = f"not {print_condition(cond.operand, _PREC_NOT)}"
        return f"({text})" if ctx > _PREC_NOT else text
    if isinstance(cond, Comparison):
        return (
            f"{print_condition(cond.lhs, _PREC_ATOM)} {cond.op.value} "
            f"{print_condition(cond.rhs, _PREC_ATOM)}"
        )
    if isinstance(cond, Name):
        return cond.name
    if isinstance(cond, IntLit):
        return str(cond.value)
    if isinstance(cond, BoolLit):
        return "true" if cond.value else "false"
    raise TypeError(f"not a condition node: {cond!r}")


def print_response(resp: Response) -> str:
    parts = []
    if resp.polarity is Polarity.FORBID:
        parts.append("not")
    parts.append(resp.event)
    if resp.deadline is not None:
        parts.append("within")
        parts.append(print_condition(resp.deadline.amount, _PREC_ATOM))
        parts.append(resp.deadline.unit.value)
    text = " ".join(parts)
    if resp.alternative is not None:
        text += f" otherwise {print_response(resp.alternative)}"
    return text


def _print_rule_body(rid: str, trigger_event: str, condition, response: Response, defeaters: tuple[Defeater, ...]) -> str:
    text = f"{rid} when {trigger_event}"
    if condition is not None:
        text += f" and ({print_condition(condition)})"
    text += f" then {print_response(response)}"
    for d in defeaters:
        text += f" unless ({print_condition(d.condition)})"
        if d.response is not None:
            text += f" then {print_response(d.response)}"
    return text


def print_rule(rule: Rule) -> str:
    return _print_rule_body(rule.id, rule.trigger.event, rule.trigger.condition, rule.response, rule.defeaters)


def print_pattern(pat: TracePattern) -> str:
    return _print_rule_body(pat.id, pat.trigger.event, pat.trigger.condition, pat.pattern, ())


def pretty_print(document: Document) -> str:
    lines: list[str] = ["def_start"]
    for d in document.definitions:
        if isinstance(d, EventDef):
            lines.append(f"{_INDENT}event {d.name}")
        elif isinstance(d, MeasureDef):
            if isinstance(d.mtype, BooleanType):
                ty = "boolean"
            elif isinstance(d.mtype, NumericType):
                ty = "numeric"
            elif isinstance(d.mtype, ScaleType):
                ty = f"scale({', '.join(d.mtype.labels)})"
            else:
                raise TypeError(f"unknown measure type: {d.mtype!r}")
            lines.append(f"{_INDENT}measure {d.name}: {ty}")
        elif isinstance(d, ConstantDef):
            lines.append(f"{_INDENT}constant {d.name} = {d.value}")
    lines.append("def_end")
    lines.append("")
    lines.append("rule_start")
    for r in document.rules:
        lines.append(f"{_INDENT}{print_rule(r)}")
    lines.append("rule_end")
    if document.concerns:
        lines.append("")
        lines.append("concern_start")
        for c in document.concerns:
            lines.append(f"{_INDENT}{print_pattern(c)}")
        lines.append("concern_end")
    if document.purposes:
        lines.append("")
        lines.append("purpose_start")
        for p in document.purposes:
            lines.append(f"{_INDENT}{print_pattern(p)}")
        lines.append("purpose_end")
    return "\n".join(lines) + "\n"
