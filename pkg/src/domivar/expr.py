"""A small arithmetic language for instance files.

Grammar::

    pred   := 'true' | cmp ('and' cmp)*
    cmp    := expr op expr            op in <, <=, ==, =, >=, >
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | atom
    atom   := number | VAR '[' int ']' | func '(' args ')' | '(' expr ')'
    func   := abs | min | max | pow2 | sqrt

``VAR`` is ``y`` for domination rules and ``x`` for objective rules.
Comparisons are exact (no tolerance); boundaries need explicit ``==`` rules.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

__all__ = ["ExpressionError", "Expression", "Predicate", "parse_expression", "parse_predicate"]


class ExpressionError(ValueError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op><=|>=|==|[-+*/()\[\],<>=]))"
)

_FUNCS = {
    "abs": (1, abs),
    "min": (2, min),
    "max": (2, max),
    "pow2": (1, lambda e: 2.0 ** e),
    "sqrt": (1, None),
}

_CMP = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
    "=": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


def _tokenize(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExpressionError(f"unexpected character {text[pos:pos + 1]!r} at {pos} in {text!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def _sqrt(v: float) -> float:
    if v < 0:
        raise ExpressionError(f"sqrt of negative value {v}")
    return math.sqrt(v)


def _div(a: float, b: float) -> float:
    if b == 0:
        raise ExpressionError("division by zero")
    return a / b


class _Parser:
    def __init__(self, text: str, var: str):
        self.text = text
        self.var = var
        self.toks = _tokenize(text)
        self.i = 0
        self.max_index = -1

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        kind, tok = self.peek()
        if kind is None:
            raise ExpressionError(f"unexpected end of input in {self.text!r}")
        if value is not None and tok != value:
            raise ExpressionError(f"expected {value!r}, found {tok!r} in {self.text!r}")
        self.i += 1
        return kind, tok

    def done(self):
        if self.i != len(self.toks):
            raise ExpressionError(f"trailing input {self.toks[self.i][1]!r} in {self.text!r}")

    def expr(self) -> Callable:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = (lambda a, b: lambda v: a(v) + b(v))(node, rhs) if op == "+" else \
                (lambda a, b: lambda v: a(v) - b(v))(node, rhs)
        return node

    def term(self) -> Callable:
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            node = (lambda a, b: lambda v: a(v) * b(v))(node, rhs) if op == "*" else \
                (lambda a, b: lambda v: _div(a(v), b(v)))(node, rhs)
        return node

    def unary(self) -> Callable:
        if self.peek()[1] == "-":
            self.take()
            inner = self.unary()
            return lambda v: -inner(v)
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self) -> Callable:
        kind, tok = self.take()
        if kind == "num":
            c = float(tok)
            return lambda v: c
        if tok == "(":
            node = self.expr()
            self.take(")")
            return node
        if kind == "name":
            if tok == self.var:
                self.take("[")
                k, idx = self.take()
                if k != "num" or not idx.isdigit():
                    raise ExpressionError(f"index must be a nonnegative integer in {self.text!r}")
                self.take("]")
                j = int(idx)
                self.max_index = max(self.max_index, j)
                return lambda v: float(v[j])
            if tok in _FUNCS:
                arity, fn = _FUNCS[tok]
                if tok == "sqrt":
                    fn = _sqrt
                self.take("(")
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.take(")")
                if len(args) != arity:
                    raise ExpressionError(f"{tok} takes {arity} argument(s) in {self.text!r}")
                if arity == 1:
                    a = args[0]
                    return lambda v: fn(a(v))
                a, b = args
                return lambda v: fn(a(v), b(v))
            raise ExpressionError(f"unknown name {tok!r} in {self.text!r} (variable is {self.var!r})")
        raise ExpressionError(f"unexpected token {tok!r} in {self.text!r}")

    def predicate(self) -> Callable:
        if self.peek() == ("name", "true"):
            self.take()
            return lambda v: True
        parts = [self.comparison()]
        while self.peek() == ("name", "and"):
            self.take()
            parts.append(self.comparison())
        return lambda v: all(p(v) for p in parts)

    def comparison(self) -> Callable:
        lhs = self.expr()
        kind, op = self.take()
        if op not in _CMP:
            raise ExpressionError(f"expected a comparison operator, found {op!r} in {self.text!r}")
        rhs = self.expr()
        cmp = _CMP[op]
        return lambda v: cmp(lhs(v), rhs(v))


@dataclass(frozen=True)
class Expression:
    source: str
    fn: Callable
    max_index: int

    def __call__(self, v) -> float:
        try:
            out = float(self.fn(v))
        except IndexError:
            raise ExpressionError(f"index out of range evaluating {self.source!r}") from None
        except OverflowError:
            raise ExpressionError(f"overflow evaluating {self.source!r}") from None
        if not math.isfinite(out):
            raise ExpressionError(f"non-finite value evaluating {self.source!r}")
        return out


@dataclass(frozen=True)
class Predicate:
    source: str
    fn: Callable
    max_index: int

    def __call__(self, v) -> bool:
        try:
            return bool(self.fn(v))
        except IndexError:
            raise ExpressionError(f"index out of range evaluating {self.source!r}") from None


def parse_expression(text, var: str = "y") -> Expression:
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        c = float(text)
        return Expression(repr(c), lambda v: c, -1)
    if not isinstance(text, str):
        raise ExpressionError(f"expression must be a string or number, got {type(text).__name__}")
    p = _Parser(text, var)
    fn = p.expr()
    p.done()
    return Expression(text, fn, p.max_index)


def parse_predicate(text: str, var: str = "y") -> Predicate:
    if not isinstance(text, str):
        raise ExpressionError(f"predicate must be a string, got {type(text).__name__}")
    p = _Parser(text, var)
    fn = p.predicate()
    p.done()
    return Predicate(text, fn, p.max_index)
