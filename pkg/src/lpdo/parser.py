"""Recursive-descent parser for the noncommutative operator grammar.

    expression ::= ['-'] term (('+' | '-') term)*
    term       ::= factor (('*' | '/') factor)*
    factor     ::= atom ['^' positive-integer]
    atom       ::= integer | 'x' | 'y' | 'i' | 'sqrt' '(' ['-'] integer ')'
                 | 'Dx' | 'Dy' | parameter | '(' expression ')'

'*' is the noncommutative operator product, normalized through compose, so
Dx*x parses to x*Dx + 1 while Dy*x is just x*Dy.  '/' divides by an
order-zero operand (a function).  Juxtaposition is not multiplication.
Parameters must be declared up front; unknown names are reported with
their position.  The input-only aliases (unicode minus, and the symbols
for the two derivations written with the partial sign) are tolerated.
"""

from __future__ import annotations

import re

from .expr import RatExpr
from .operator import LPDO


class ParseError(ValueError):
    """Syntax or symbol error, annotated with line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()])
  | (?P<other>.)
    """,
    re.VERBOSE,
)

_ALIASES = {
    "−": "-",   # unicode minus
    "–": "-",
    "·": "*",   # middle dot
    "∂x": "Dx",
    "∂y": "Dy",
}


def _normalize_source(text: str) -> str:
    for src, dst in _ALIASES.items():
        text = text.replace(src, dst)
    return text


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    out = []
    line, col = 1, 1
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ws":
            for ch in chunk:
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            continue
        if kind == "other":
            raise ParseError(f"unexpected character {chunk!r}", line, col)
        if kind == "op" and chunk == "**":
            chunk = "^"
        out.append(_Token(kind, chunk, line, col))
        col += len(m.group())
    out.append(_Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, tokens: list[_Token], params: set[str]):
        self.tokens = tokens
        self.pos = 0
        self.params = params

    @property
    def token(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        t = self.token
        self.pos += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.token
        if t.text != text:
            self.fail(f"expected {text!r}, found {t.text!r}" if t.text
                      else f"expected {text!r}, found end of input")
        return self.advance()

    def fail(self, message: str):
        t = self.token
        raise ParseError(message, t.line, t.column)

    # grammar

    def expression(self) -> LPDO:
        negate = False
        if self.token.text == "-":
            self.advance()
            negate = True
        elif self.token.text == "+":
            self.advance()
        value = self.term()
        if negate:
            value = -value
        while self.token.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> LPDO:
        value = self.factor()
        while self.token.text in ("*", "/"):
            op = self.advance()
            rhs = self.factor()
            if op.text == "*":
                value = value.compose(rhs)
            else:
                if rhs.order > 0:
                    raise ParseError("cannot divide by an operator of order > 0",
                                     op.line, op.column)
                f = rhs.coeff(0, 0)
                if f.is_zero():
                    raise ParseError("division by zero", op.line, op.column)
                value = value.compose(LPDO.function(f.inverse()))
        return value

    def factor(self) -> LPDO:
        if self.token.text == "-":
            t = self.advance()
            return -self.factor()
        value = self.atom()
        if self.token.text == "^":
            self.advance()
            t = self.token
            if t.kind != "int":
                self.fail("exponent must be a positive integer")
            e = int(self.advance().text)
            if e < 1:
                raise ParseError("exponent must be a positive integer",
                                 t.line, t.column)
            out = value
            for _ in range(e - 1):
                out = out.compose(value)
            value = out
        return value

    def atom(self) -> LPDO:
        t = self.token
        if t.kind == "int":
            self.advance()
            return LPDO.function(RatExpr.from_int(int(t.text)))
        if t.text == "(":
            self.advance()
            value = self.expression()
            self.expect(")")
            return value
        if t.kind == "name":
            self.advance()
            name = t.text
            if name == "sqrt":
                self.expect("(")
                sign = 1
                if self.token.text == "-":
                    self.advance()
                    sign = -1
                num = self.token
                if num.kind != "int":
                    self.fail("sqrt takes an integer")
                self.advance()
                self.expect(")")
                return LPDO.function(RatExpr.sqrt_int(sign * int(num.text)))
            if name == "Dx":
                return LPDO.dx()
            if name == "Dy":
                return LPDO.dy()
            if name == "x":
                return LPDO.function(RatExpr.X)
            if name == "y":
                return LPDO.function(RatExpr.Y)
            if name == "i":
                return LPDO.function(RatExpr.sqrt_int(-1))
            if name in self.params:
                return LPDO.function(RatExpr.symbol(name))
            raise ParseError(
                f"unknown symbol {name!r} (declare parameters with --params)",
                t.line, t.column)
        self.fail(f"unexpected token {t.text!r}" if t.text else "unexpected end of input")


def parse(text: str, params: set[str] | frozenset[str] | None = None) -> LPDO:
    """Parse operator text into a normal-form LPDO."""
    tokens = _tokenize(_normalize_source(text))
    parser = _Parser(tokens, set(params or ()))
    value = parser.expression()
    t = parser.token
    if t.kind != "eof":
        raise ParseError(f"unexpected trailing input {t.text!r}", t.line, t.column)
    return value


def parse_function(text: str, params: set[str] | None = None) -> RatExpr:
    """Parse an order-zero expression (a coefficient function)."""
    op = parse(text, params)
    if op.order > 0:
        raise ParseError("expected a function, found derivatives", 1, 1)
    return op.coeff(0, 0)
