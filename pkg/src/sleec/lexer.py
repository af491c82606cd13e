"""Lexer for the SLEEC DSL.

Total: unknown characters become ERROR tokens, never exceptions. Whitespace
and `//` line comments are skipped; every other character lands in exactly
one token, so the token stream plus trivia reproduces the source.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ast import Span


class TokenKind(enum.Enum):
    IDENT_CAP = "identifier"  # upper-initial
    IDENT_LOW = "identifier_lower"  # lower-initial
    INT = "integer"
    KEYWORD = "keyword"
    UNIT = "time_unit"
    LPAREN = "("
    RPAREN = ")"
    COLON = ":"
    COMMA = ","
    ASSIGN = ":="
    EQ = "="
    NE = "<>"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    ERROR = "error"
    EOF = "eof"


KEYWORDS = {
    "when", "then", "unless", "otherwise", "within", "and", "or", "not",
    "event", "measure", "constant", "boolean", "numeric", "scale",
    "true", "false",
    "def_start", "def_end", "rule_start", "rule_end",
    "concern_start", "concern_end", "purpose_start", "purpose_end",
}

# Singular forms accepted alongside plurals (Table-style corpora mix them).
UNIT_WORDS = {
    "second": "seconds", "seconds": "seconds",
    "minute": "minutes", "minutes": "minutes",
    "hour": "hours", "hours": "hours",
    "day": "days", "days": "days",
}


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span

    def is_kw(self, word: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.lexeme == word


_PUNCT = {
    ":=": TokenKind.ASSIGN,
    "<=": TokenKind.LE,
    ">=": TokenKind.GE,
    "<>": TokenKind.NE,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ":": TokenKind.COLON,
    ",": TokenKind.COMMA,
    "=": TokenKind.EQ,
    "<": TokenKind.LT,
    ">": TokenKind.GT,
}


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def make_span(start: int, sline: int, scol: int, end: int, eline: int, ecol: int) -> Span:
        return Span(start, end, sline, scol, eline, ecol)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue

        start, sline, scol = i, line, col

        if _is_ident_start(ch):
            while i < n and _is_ident_char(source[i]):
                i += 1
                col += 1
            word = source[start:i]
            span = make_span(start, sline, scol, i, line, col)
            if word in KEYWORDS:
                tokens.append(Token(TokenKind.KEYWORD, word, span))
            elif word in UNIT_WORDS:
                tokens.append(Token(TokenKind.UNIT, word, span))
            elif word[0].isupper():
                tokens.append(Token(TokenKind.IDENT_CAP, word, span))
            else:
                tokens.append(Token(TokenKind.IDENT_LOW, word, span))
            continue

        if ch.isdigit():
            while i < n and source[i].isdigit():
                i += 1
                col += 1
            span = make_span(start, sline, scol, i, line, col)
            tokens.append(Token(TokenKind.INT, source[start:i], span))
            continue

        two = source[i : i + 2]
        if len(two) == 2 and two in _PUNCT:
            i += 2
            col += 2
            tokens.append(Token(_PUNCT[two], two, make_span(start, sline, scol, i, line, col)))
            continue
        if ch in _PUNCT:
            i += 1
            col += 1
            tokens.append(Token(_PUNCT[ch], ch, make_span(start, sline, scol, i, line, col)))
            continue

        # Unknown character: emit an error token and keep going.
        i += 1
        col += 1
        tokens.append(Token(TokenKind.ERROR, ch, make_span(start, sline, scol, i, line, col)))

    return tokens
