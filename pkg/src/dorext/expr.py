"""Tokenizer and recursive-descent parser for polynomial expressions.

Expressions such as ``x1*x2 + 1/2*x1^2`` or ``-(y2 + 3*y1)`` parse into a tiny
tuple AST that :func:`evaluate` folds into any algebra whose elements support
``+``, ``-`` and ``*``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import SpecSyntaxError

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<flag>--[A-Za-z][A-Za-z0-9-]*)
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:\.[A-Za-z_][A-Za-z0-9_']*)?)
  | (?P<op>[-+*/^()=<,])
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of line" if self.kind == "eol" else repr(self.text)


def tokenize(line: str, lineno: int = 1) -> list[Token]:
    tokens = []
    for m in _TOKEN.finditer(line):
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            continue
        col = m.start() + 1
        if kind == "bad":
            raise SpecSyntaxError(f"unexpected character {m.group()!r}", lineno, col)
        tokens.append(Token(kind, m.group(), lineno, col))
    tokens.append(Token("eol", "", lineno, len(line) + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eol":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek.text == text and self.peek.kind != "eol"

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek
        if tok.text != text or tok.kind == "eol":
            raise SpecSyntaxError(f"expected {text!r}, found {tok.describe()}", tok.line, tok.column)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek
        if tok.kind != kind:
            raise SpecSyntaxError(f"expected {what}, found {tok.describe()}", tok.line, tok.column)
        return self.next()

    def expect_end(self):
        tok = self.peek
        if tok.kind != "eol":
            raise SpecSyntaxError(f"expected end of line, found {tok.describe()}", tok.line, tok.column)


def parse_expr(ts: TokenStream):
    terms = []
    sign = 1
    if ts.accept("-"):
        sign = -1
    else:
        ts.accept("+")
    terms.append((sign, _parse_term(ts)))
    while ts.at("+") or ts.at("-"):
        sign = 1 if ts.next().text == "+" else -1
        terms.append((sign, _parse_term(ts)))
    return ("add", tuple(terms))


def _parse_term(ts: TokenStream):
    factors = [_parse_factor(ts)]
    while ts.at("*") or ts.at("/"):
        op = ts.next().text
        if op == "*":
            factors.append(_parse_factor(ts))
        else:
            tok = ts.expect_kind("number", "an integer denominator")
            if int(tok.text) == 0:
                raise SpecSyntaxError("division by zero", tok.line, tok.column)
            factors.append(("num", Fraction(1, int(tok.text))))
    return ("mul", tuple(factors))


def _parse_factor(ts: TokenStream):
    atom = _parse_atom(ts)
    if ts.accept("^"):
        tok = ts.expect_kind("number", "a positive integer exponent")
        exp = int(tok.text)
        if exp < 1:
            raise SpecSyntaxError("exponents must be positive", tok.line, tok.column)
        return ("pow", atom, exp)
    return atom


def _parse_atom(ts: TokenStream):
    tok = ts.peek
    if tok.kind == "number":
        ts.next()
        return ("num", Fraction(int(tok.text)))
    if tok.kind == "ident":
        ts.next()
        return ("name", tok.text, tok.line, tok.column)
    if tok.text == "(" and tok.kind == "op":
        ts.next()
        inner = parse_expr(ts)
        ts.expect(")")
        return inner
    raise SpecSyntaxError(f"expected a number, name or '(', found {tok.describe()}", tok.line, tok.column)


def parse_expression(text: str, lineno: int = 1):
    ts = TokenStream(tokenize(text, lineno))
    node = parse_expr(ts)
    ts.expect_end()
    return node


def names_in(node) -> list[tuple[str, int, int]]:
    kind = node[0]
    if kind == "name":
        return [node[1:]]
    if kind == "add":
        return [n for _, t in node[1] for n in names_in(t)]
    if kind == "mul":
        return [n for f in node[1] for n in names_in(f)]
    if kind == "pow":
        return names_in(node[1])
    return []


def evaluate(node, const: Callable[[Fraction], object], name: Callable[[str, int, int], object]):
    """Fold an AST using ``const`` for numbers and ``name`` for identifiers."""
    kind = node[0]
    if kind == "num":
        return const(node[1])
    if kind == "name":
        return name(node[1], node[2], node[3])
    if kind == "pow":
        base = evaluate(node[1], const, name)
        out = base
        for _ in range(node[2] - 1):
            out = out * base
        return out
    if kind == "mul":
        out = None
        for f in node[1]:
            v = evaluate(f, const, name)
            out = v if out is None else out * v
        return out
    out = None
    for sign, t in node[1]:
        v = evaluate(t, const, name)
        if sign < 0:
            v = -v
        out = v if out is None else out + v
    return out
