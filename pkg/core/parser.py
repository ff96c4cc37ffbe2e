"""Recursive-descent parser for the expression grammar.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' integer)?
    atom   := number | 'i' | 'pi' | 'z' | func '(' expr ')' | '(' expr ')'
    func   := exp | cos | sin | sqrt

Unary minus binds looser than '^', so ``-z^2`` reads as ``-(z^2)``.
Error offsets are byte offsets into the UTF-8 encoded text.
"""

from __future__ import annotations

import math
import re
from typing import Callable

from config.constants import ERROR_NON_INTEGER_EXPONENT, ERROR_PARSE
from core.errors import ExprParseError
from core.expr import Const, Expr, Z, add, cos, div, exp, mul, neg, power, sin, sqrt, sub

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_INTEGER = re.compile(r"[+-]?\d+")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_FUNCTIONS: dict[str, Callable[[Expr], Expr]] = {"exp": exp, "cos": cos, "sin": sin, "sqrt": sqrt}
_CONSTANTS: dict[str, Expr] = {"z": Z, "i": Const(1j), "pi": Const(complex(math.pi))}


class _Parser:
    def __init__(self, text: str) -> None:
        self._text = text
        self._pos = 0

    # -- lexing helpers ----------------------------------------------------

    def _byte_offset(self, index: int) -> int:
        return len(self._text[:index].encode("utf-8"))

    def _error(self, details: str, index: int | None = None) -> ExprParseError:
        offset = self._byte_offset(self._pos if index is None else index)
        return ExprParseError(ERROR_PARSE.format(offset=offset, details=details), offset)

    def _skip_space(self) -> None:
        while self._pos < len(self._text) and self._text[self._pos].isspace():
            self._pos += 1

    def _peek(self) -> str:
        self._skip_space()
        return self._text[self._pos] if self._pos < len(self._text) else ""

    def _expect(self, char: str) -> None:
        if self._peek() != char:
            found = self._peek() or "end of input"
            raise self._error(f"expected '{char}', found '{found}'")
        self._pos += 1

    # -- grammar -----------------------------------------------------------

    def parse(self) -> Expr:
        result = self._expr()
        if self._peek():
            raise self._error(f"unexpected '{self._peek()}'")
        return result

    def _expr(self) -> Expr:
        node = self._term()
        while self._peek() in ("+", "-"):
            op = self._text[self._pos]
            self._pos += 1
            rhs = self._term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def _term(self) -> Expr:
        node = self._factor()
        while self._peek() in ("*", "/"):
            op = self._text[self._pos]
            self._pos += 1
            rhs = self._factor()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def _factor(self) -> Expr:
        if self._peek() == "-":
            self._pos += 1
            return neg(self._factor())
        base = self._atom()
        if self._peek() == "^":
            self._pos += 1
            return power(base, self._integer_exponent())
        return base

    def _integer_exponent(self) -> int:
        self._skip_space()
        start = self._pos
        match = _INTEGER.match(self._text, self._pos)
        if match is None:
            raise ExprParseError(
                ERROR_NON_INTEGER_EXPONENT.format(offset=self._byte_offset(start)), self._byte_offset(start)
            )
        end = match.end()
        if end < len(self._text) and self._text[end] in ".eE":
            raise ExprParseError(
                ERROR_NON_INTEGER_EXPONENT.format(offset=self._byte_offset(start)), self._byte_offset(start)
            )
        self._pos = end
        return int(match.group(0))

    def _atom(self) -> Expr:
        char = self._peek()
        if not char:
            raise self._error("unexpected end of input")
        if char == "(":
            self._pos += 1
            inner = self._expr()
            self._expect(")")
            return inner
        number = _NUMBER.match(self._text, self._pos)
        if number is not None:
            self._pos = number.end()
            return Const(complex(float(number.group(0))))
        name = _NAME.match(self._text, self._pos)
        if name is None:
            raise self._error(f"unexpected '{char}'")
        start = self._pos
        word = name.group(0)
        self._pos = name.end()
        if word in _CONSTANTS:
            return _CONSTANTS[word]
        if word in _FUNCTIONS:
            self._expect("(")
            inner = self._expr()
            self._expect(")")
            return _FUNCTIONS[word](inner)
        raise self._error(f"unknown name '{word}'", start)


def parse(text: str) -> Expr:
    return _Parser(text).parse()
