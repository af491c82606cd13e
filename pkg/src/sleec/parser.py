"""Recursive-descent parser for the SLEEC DSL.

Never raises on bad input: malformed constructs become diagnostics with
spans, the parser resynchronizes at definition/rule boundaries, and every
well-formed construct elsewhere in the document is still returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    And,
    BooleanType,
    BoolLit,
    CmpOp,
    Comparison,
    ConstantDef,
    Condition,
    Deadline,
    Defeater,
    Definition,
    Diagnostic,
    Document,
    EventDef,
    IntLit,
    MeasureDef,
    Name,
    Not,
    NumericType,
    Or,
    PatternKind,
    Polarity,
    Response,
    Rule,
    ScaleType,
    Severity,
    Span,
    TimeUnit,
    TracePattern,
    Trigger,
)
from .lexer import UNIT_WORDS, Token, TokenKind, tokenize

SYNTAX_ERROR = "SLEEC-P001"
SCALE_TOO_SMALL = "SLEEC-P002"
UNKNOWN_CHAR = "SLEEC-P003"
MISSING_BLOCK = "SLEEC-P004"

_BLOCK_STARTS = {"def_start", "rule_start", "concern_start", "purpose_start"}
_BLOCK_ENDS = {"def_end", "rule_end", "concern_end", "purpose_end"}
_DEF_HEADS = {"event", "measure", "constant"}

_CMP_TOKENS = {
    TokenKind.EQ: CmpOp.EQ,
    TokenKind.NE: CmpOp.NE,
    TokenKind.LT: CmpOp.LT,
    TokenKind.LE: CmpOp.LE,
    TokenKind.GT: CmpOp.GT,
    TokenKind.GE: CmpOp.GE,
}


@dataclass
class ParseResult:
    document: Document
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not any(d.severity is Severity.ERROR for d in self.diagnostics)


class _Bail(Exception):
    """Internal: abort the current construct and resynchronize."""


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.diagnostics: list[Diagnostic] = []
        raw = tokenize(source)
        self.tokens = []
        for tok in raw:
            if tok.kind is TokenKind.ERROR:
                self._diag(f"unknown character {tok.lexeme!r}", tok.span, UNKNOWN_CHAR)
            else:
                self.tokens.append(tok)
        end = len(source)
        line = source.count("\n") + 1
        col = len(source) - (source.rfind("\n") + 1) + 1
        self.eof = Token(TokenKind.EOF, "", Span(end, end, line, col, line, col))
        self.pos = 0

    # --- token primitives ----------------------------------------------

    def cur(self) -> Token:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else self.eof

    def peek(self, offset: int = 1) -> Token:
        p = self.pos + offset
        return self.tokens[p] if p < len(self.tokens) else self.eof

    def advance(self) -> Token:
        tok = self.cur()
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def at_kw(self, *words: str) -> bool:
        tok = self.cur()
        return tok.kind is TokenKind.KEYWORD and tok.lexeme in words

    def _diag(self, message: str, span: Span, code: str, severity: Severity = Severity.ERROR) -> None:
        self.diagnostics.append(Diagnostic(severity, message, span, code))

    def _fail(self, message: str, tok: Token | None = None) -> None:
        tok = tok or self.cur()
        shown = tok.lexeme if tok.kind is not TokenKind.EOF else "end of input"
        self._diag(f"{message}, found {shown!r}", tok.span, SYNTAX_ERROR)
        raise _Bail()

    def expect_kw(self, word: str) -> Token:
        if self.at_kw(word):
            return self.advance()
        self._fail(f"expected '{word}'")
        raise AssertionError  # unreachable

    def expect_ident(self, what: str) -> Token:
        tok = self.cur()
        if tok.kind in (TokenKind.IDENT_CAP, TokenKind.IDENT_LOW):
            return self.advance()
        self._fail(f"expected {what}")
        raise AssertionError

    def span_between(self, start_tok: Token, end_tok: Token) -> Span:
        s, e = start_tok.span, end_tok.span
        return Span(s.start, e.end, s.line, s.col, e.end_line, e.end_col)

    # --- recovery --------------------------------------------------------

    def sync(self, *, in_defs: bool = False) -> None:
        """Skip to the next plausible construct boundary."""
        while self.cur().kind is not TokenKind.EOF:
            tok = self.cur()
            if tok.kind is TokenKind.KEYWORD and tok.lexeme in (_BLOCK_STARTS | _BLOCK_ENDS):
                return
            if in_defs and tok.kind is TokenKind.KEYWORD and tok.lexeme in _DEF_HEADS:
                return
            if not in_defs and tok.kind in (TokenKind.IDENT_CAP, TokenKind.IDENT_LOW):
                nxt = self.peek()
                if nxt.is_kw("when") or nxt.kind is TokenKind.ASSIGN:
                    return
            self.advance()

    # --- document ---------------------------------------------------------

    def parse_document(self) -> Document:
        first_tok = self.cur()
        definitions: list[Definition] = []
        rules: list[Rule] = []
        concerns: list[TracePattern] = []
        purposes: list[TracePattern] = []
        seen: set[str] = set()

        while self.cur().kind is not TokenKind.EOF:
            tok = self.cur()
            if tok.is_kw("def_start"):
                seen.add("def")
                self.parse_def_block(definitions)
            elif tok.is_kw("rule_start"):
                seen.add("rule")
                self.parse_rule_block("rule_end", rules, None)
            elif tok.is_kw("concern_start"):
                seen.add("concern")
                self.parse_rule_block("concern_end", None, (PatternKind.CONCERN, concerns))
            elif tok.is_kw("purpose_start"):
                seen.add("purpose")
                self.parse_rule_block("purpose_end", None, (PatternKind.PURPOSE, purposes))
            else:
                self._diag(
                    f"expected a block ('def_start', 'rule_start', 'concern_start' or "
                    f"'purpose_start'), found {tok.lexeme!r}",
                    tok.span,
                    SYNTAX_ERROR,
                )
                self.advance()
                self.sync()

        for required, marker in (("def", "def_start"), ("rule", "rule_start")):
            if required not in seen:
                self._diag(f"missing '{marker}' block", self.eof.span, MISSING_BLOCK)

        last = self.tokens[-1] if self.tokens else self.eof
        return Document(
            definitions=tuple(definitions),
            rules=tuple(rules),
            concerns=tuple(concerns),
            purposes=tuple(purposes),
            span=self.span_between(first_tok if self.tokens else self.eof, last),
        )

    # --- definitions --------------------------------------------------------

    def parse_def_block(self, out: list[Definition]) -> None:
        self.expect_kw("def_start")
        while not self.at_kw("def_end") and self.cur().kind is not TokenKind.EOF:
            if self.at_kw(*(_BLOCK_STARTS | _BLOCK_ENDS - {"def_end"})):
                break
            try:
                out.append(self.parse_definition())
            except _Bail:
                self.sync(in_defs=True)
        if self.at_kw("def_end"):
            self.advance()
        else:
            self._diag("missing 'def_end'", self.cur().span, SYNTAX_ERROR)

    def parse_definition(self) -> Definition:
        start = self.cur()
        if self.at_kw("event"):
            self.advance()
            name = self.expect_ident("event name")
            return EventDef(name.lexeme, span=self.span_between(start, name))
        if self.at_kw("measure"):
            self.advance()
            name = self.expect_ident("measure name")
            if self.cur().kind is TokenKind.COLON:
                self.advance()
            else:
                self._fail("expected ':' after measure name")
            mtype, last = self.parse_measure_type()
            return MeasureDef(name.lexeme, mtype, span=self.span_between(start, last))
        if self.at_kw("constant"):
            self.advance()
            name = self.expect_ident("constant name")
            if self.cur().kind is TokenKind.EQ:
                self.advance()
            else:
                self._fail("expected '=' in constant definition")
            val = self.cur()
            if val.kind is not TokenKind.INT:
                self._fail("expected integer constant value")
            self.advance()
            return ConstantDef(name.lexeme, int(val.lexeme), span=self.span_between(start, val))
        self._fail("expected 'event', 'measure' or 'constant'")
        raise AssertionError

    def parse_measure_type(self) -> tuple[BooleanType | NumericType | ScaleType, Token]:
        tok = self.cur()
        if tok.is_kw("boolean"):
            self.advance()
            return BooleanType(), tok
        if tok.is_kw("numeric"):
            self.advance()
            return NumericType(), tok
        if tok.is_kw("scale"):
            self.advance()
            if self.cur().kind is not TokenKind.LPAREN:
                self._fail("expected '(' after 'scale'")
            self.advance()
            labels = [self.expect_ident("scale label").lexeme]
            while self.cur().kind is TokenKind.COMMA:
                self.advance()
                labels.append(self.expect_ident("scale label").lexeme)
            if self.cur().kind is not TokenKind.RPAREN:
                self._fail("expected ')' after scale labels")
            rp = self.advance()
            if len(labels) < 2:
                self._diag("a scale needs at least two labels", self.span_between(tok, rp), SCALE_TOO_SMALL)
            return ScaleType(tuple(labels)), rp
        self._fail("expected 'boolean', 'numeric' or 'scale'")
        raise AssertionError

    # --- rules / concerns / purposes -----------------------------------------

    def parse_rule_block(
        self,
        end_marker: str,
        rules: list[Rule] | None,
        patterns: tuple[PatternKind, list[TracePattern]] | None,
    ) -> None:
        self.advance()  # the block-start keyword
        while not self.at_kw(end_marker) and self.cur().kind is not TokenKind.EOF:
            if self.at_kw(*(_BLOCK_STARTS | _BLOCK_ENDS - {end_marker})):
                break
            try:
                rule = self.parse_rule()
                if rules is not None:
                    rules.append(rule)
                else:
                    assert patterns is not None
                    kind, out = patterns
                    if rule.defeaters:
                        self._diag(
                            f"'{kind.value}' patterns cannot have 'unless' clauses",
                            rule.defeaters[0].span,
                            SYNTAX_ERROR,
                        )
                    out.append(
                        TracePattern(kind, rule.id, rule.trigger, rule.response, span=rule.span)
                    )
            except _Bail:
                self.sync()
        if self.at_kw(end_marker):
            self.advance()
        else:
            self._diag(f"missing '{end_marker}'", self.cur().span, SYNTAX_ERROR)

    def parse_rule(self) -> Rule:
        start = self.cur()
        rid = self.expect_ident("rule identifier")
        if self.cur().kind is TokenKind.ASSIGN:
            self.advance()  # ':=' accepted and discarded
        self.expect_kw("when")
        trig_start = self.cur()
        ev = self.cur()
        if ev.kind not in (TokenKind.IDENT_CAP, TokenKind.IDENT_LOW):
            self._fail("expected event identifier")
        self.advance()
        condition = None
        last = ev
        if self.at_kw("and"):
            self.advance()
            condition = self.parse_cond()
            last = self.tokens[self.pos - 1]
        trigger = Trigger(
            ev.lexeme, condition, span=self.span_between(trig_start, last), event_span=ev.span
        )
        self.expect_kw("then")
        response = self.parse_response()
        defeaters = []
        while self.at_kw("unless"):
            d_start = self.advance()
            cond = self.parse_cond()
            resp = None
            if self.at_kw("then"):
                self.advance()
                resp = self.parse_response()
            defeaters.append(
                Defeater(cond, resp, span=self.span_between(d_start, self.tokens[self.pos - 1]))
            )
        return Rule(
            rid.lexeme,
            trigger,
            response,
            tuple(defeaters),
            span=self.span_between(start, self.tokens[self.pos - 1]),
        )

    def parse_response(self) -> Response:
        start = self.cur()
        polarity = Polarity.REQUIRE
        if self.at_kw("not"):
            self.advance()
            polarity = Polarity.FORBID
        ev = self.cur()
        if ev.kind not in (TokenKind.IDENT_CAP, TokenKind.IDENT_LOW):
            self._fail("expected event identifier")
        self.advance()
        deadline = None
        if self.at_kw("within"):
            w_start = self.advance()
            amt_tok = self.cur()
            if amt_tok.kind is TokenKind.INT:
                amount: Condition = IntLit(int(amt_tok.lexeme), span=amt_tok.span)
            elif amt_tok.kind in (TokenKind.IDENT_CAP, TokenKind.IDENT_LOW):
                amount = Name(amt_tok.lexeme, span=amt_tok.span)
            else:
                self._fail("expected integer or constant deadline")
                raise AssertionError
            self.advance()
            unit_tok = self.cur()
            if unit_tok.kind is not TokenKind.UNIT:
                self._fail("expected time unit ('seconds', 'minutes', 'hours' or 'days')")
            self.advance()
            unit = TimeUnit(UNIT_WORDS[unit_tok.lexeme])
            deadline = Deadline(amount, unit, span=self.span_between(w_start, unit_tok))
        alternative = None
        if self.at_kw("otherwise"):
            self.advance()
            alternative = self.parse_response()
        return Response(
            polarity,
            ev.lexeme,
            deadline,
            alternative,
            span=self.span_between(start, self.tokens[self.pos - 1]),
            event_span=ev.span,
        )

    # --- conditions ---------------------------------------------------------

    def parse_cond(self) -> Condition:
        return self.parse_or()

    def parse_or(self) -> Condition:
        left = self.parse_and()
        while self.at_kw("or"):
            self.advance()
            right = self.parse_and()
            left = Or(left, right, span=self._cond_span(left, right))
        return left

    def parse_and(self) -> Condition:
        left = self.parse_unary()
        while self.at_kw("and"):
            self.advance()
            right = self.parse_unary()
            left = And(left, right, span=self._cond_span(left, right))
        return left

    def parse_unary(self) -> Condition:
        if self.at_kw("not"):
            start = self.advance()
            operand = self.parse_unary()
            return Not(operand, span=self.span_between(start, self.tokens[self.pos - 1]))
        return self.parse_atom()

    def parse_atom(self) -> Condition:
        if self.cur().kind is TokenKind.LPAREN:
            self.advance()
            inner = self.parse_or()
            if self.cur().kind is not TokenKind.RPAREN:
                self._fail("expected ')'")
            self.advance()
            return inner
        lhs = self.parse_operand()
        if self.cur().kind in _CMP_TOKENS:
            op = _CMP_TOKENS[self.advance().kind]
            rhs = self.parse_operand()
            return Comparison(op, lhs, rhs, span=self._cond_span(lhs, rhs))
        if isinstance(lhs, IntLit):
            self._diag(
                "an integer cannot stand alone in a condition",
                lhs.span,
                SYNTAX_ERROR,
            )
            raise _Bail()
        return lhs

    def parse_operand(self) -> Condition:
        tok = self.cur()
        if tok.kind is TokenKind.INT:
            self.advance()
            return IntLit(int(tok.lexeme), span=tok.span)
        if tok.is_kw("true") or tok.is_kw("false"):
            self.advance()
            return BoolLit(tok.lexeme == "true", span=tok.span)
        if tok.kind in (TokenKind.IDENT_CAP, TokenKind.IDENT_LOW):
            self.advance()
            return Name(tok.lexeme, span=tok.span)
        self._fail("expected a measure, constant, literal or '('")
        raise AssertionError

    @staticmethod
    def _cond_span(left: Condition, right: Condition) -> Span:
        ls, rs = left.span, right.span
        return Span(ls.start, rs.end, ls.line, ls.col, rs.end_line, rs.end_col)


def parse(source: str) -> ParseResult:
    p = _Parser(source)
    document = p.parse_document()
    return ParseResult(document, p.diagnostics)
