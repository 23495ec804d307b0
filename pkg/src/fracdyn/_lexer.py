"""Tokenizer shared by the dimension literal syntax and the equation language."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from fracdyn.errors import DSLSyntaxError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+/\d+|\d+\.\d*|\.\d+|\d+)
  | (?P<ident>[^\W\d]\w*)
  | (?P<arrow>->)
  | (?P<op>[()\,;:=+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "ident" | "op" | "eof"
    text: str
    line: int
    column: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "arrow":
            tokens.append(Token("op", "->", line, col))
        elif kind in ("num", "ident", "op"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, text_or_tokens: str | list[Token]) -> None:
        if isinstance(text_or_tokens, str):
            text_or_tokens = tokenize(text_or_tokens)
        self.tokens = text_or_tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind in ("op", "ident") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not self.at(text):
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.error(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def error(self, message: str, tok: Token | None = None) -> None:
        tok = tok or self.peek()
        raise DSLSyntaxError(message, tok.line, tok.column)

    def expect_eof(self) -> None:
        if self.peek().kind != "eof":
            self.error(f"unexpected trailing input {self.peek().text!r}")
