"""Expression trees for structural equations, plus a small text grammar.

Grammar (binding weakest to tightest):

    expr    := or
    or      := and ("||" and)*
    and     := cmp ("&&" cmp)*
    cmp     := add (("==" | "<=" | "<") add)*
    add     := mul (("+" | "-") mul)*
    mul     := unary ("*" unary)*
    unary   := ("!" | "-") unary | atom
    atom    := INT | IDENT | "(" expr ")"
             | "ite" "(" expr "," expr "," expr ")"
             | "table" "(" IDENT ("," IDENT)* ")"
               "[" entry ("," entry)* "]"
    entry   := "(" INT ("," INT)* ")" "->" INT

Booleans are integers: comparisons and logical operators yield 0 or 1, and
any nonzero value counts as true.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

from .errors import EvaluationError, ParseError


class Expr:
    """Base class for expression nodes. Instances are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class Lit(Expr):
    value: int


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "-" or "!"
    arg: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # one of + - * == < <= && ||
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Ite(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass(frozen=True)
class Table(Expr):
    """Explicit lookup table over the listed variables.

    `entries` maps one value tuple (aligned with `vars`) to an output; it
    must cover every combination that can occur, which `validate` checks
    against the declared domains.
    """

    vars: tuple[str, ...]
    entries: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if not self.vars:
            raise ParseError("a table must read at least one variable; use a literal instead")
        for key, _ in self.entries:
            if len(key) != len(self.vars):
                raise ParseError(
                    f"table entry {key} has {len(key)} values for {len(self.vars)} variables"
                )

    @staticmethod
    def from_mapping(variables, mapping) -> "Table":
        entries = tuple(sorted((tuple(k), v) for k, v in dict(mapping).items()))
        return Table(tuple(variables), entries)

    def mapping(self) -> dict[tuple[int, ...], int]:
        return dict(self.entries)


@lru_cache(maxsize=None)
def variables(expr: Expr) -> frozenset[str]:
    """All variable names referenced by `expr`."""
    if isinstance(expr, Lit):
        return frozenset()
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, Unary):
        return variables(expr.arg)
    if isinstance(expr, Binary):
        return variables(expr.left) | variables(expr.right)
    if isinstance(expr, Ite):
        return variables(expr.cond) | variables(expr.then) | variables(expr.other)
    if isinstance(expr, Table):
        return frozenset(expr.vars)
    raise TypeError(f"not an expression: {expr!r}")


def _truth(x: int) -> bool:
    return x != 0


def compile_expr(expr: Expr) -> Callable[[Mapping[str, int]], int]:
    """Compile `expr` into a closure evaluating it over an environment."""
    if isinstance(expr, Lit):
        v = expr.value
        return lambda env: v
    if isinstance(expr, Var):
        name = expr.name
        return lambda env: env[name]
    if isinstance(expr, Unary):
        arg = compile_expr(expr.arg)
        if expr.op == "-":
            return lambda env: -arg(env)
        if expr.op == "!":
            return lambda env: 0 if _truth(arg(env)) else 1
        raise ParseError(f"unknown unary operator {expr.op!r}")
    if isinstance(expr, Binary):
        lf, rf = compile_expr(expr.left), compile_expr(expr.right)
        op = expr.op
        if op == "+":
            return lambda env: lf(env) + rf(env)
        if op == "-":
            return lambda env: lf(env) - rf(env)
        if op == "*":
            return lambda env: lf(env) * rf(env)
        if op == "==":
            return lambda env: 1 if lf(env) == rf(env) else 0
        if op == "<":
            return lambda env: 1 if lf(env) < rf(env) else 0
        if op == "<=":
            return lambda env: 1 if lf(env) <= rf(env) else 0
        if op == "&&":
            return lambda env: 1 if (_truth(lf(env)) and _truth(rf(env))) else 0
        if op == "||":
            return lambda env: 1 if (_truth(lf(env)) or _truth(rf(env))) else 0
        raise ParseError(f"unknown binary operator {op!r}")
    if isinstance(expr, Ite):
        cf = compile_expr(expr.cond)
        tf = compile_expr(expr.then)
        of = compile_expr(expr.other)
        return lambda env: tf(env) if _truth(cf(env)) else of(env)
    if isinstance(expr, Table):
        names = expr.vars
        mapping = dict(expr.entries)

        def _lookup(env, _names=names, _map=mapping):
            key = tuple(env[n] for n in _names)
            try:
                return _map[key]
            except KeyError:
                raise EvaluationError(
                    f"table over {_names} has no entry for {key}"
                ) from None

        return _lookup
    raise TypeError(f"not an expression: {expr!r}")


def evaluate(expr: Expr, env: Mapping[str, int]) -> int:
    return compile_expr(expr)(env)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>->|==|<=|&&|\|\||[()\[\],+\-*<!]))"
)

_KEYWORDS = {"ite", "table"}


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.lastgroup == "int":
            tokens.append(("int", m.group("int")))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident")))
        else:
            tokens.append(("op", m.group("op")))
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text = self.next()
        if text != value:
            raise ParseError(f"expected {value!r}, got {text or 'end of input'!r} in {self.text!r}")

    def parse(self) -> Expr:
        expr = self.or_expr()
        if self.peek() != ("end", ""):
            raise ParseError(f"trailing input at token {self.peek()[1]!r} in {self.text!r}")
        return expr

    def or_expr(self) -> Expr:
        node = self.and_expr()
        while self.peek() == ("op", "||"):
            self.next()
            node = Binary("||", node, self.and_expr())
        return node

    def and_expr(self) -> Expr:
        node = self.cmp_expr()
        while self.peek() == ("op", "&&"):
            self.next()
            node = Binary("&&", node, self.cmp_expr())
        return node

    def cmp_expr(self) -> Expr:
        node = self.add_expr()
        while self.peek()[0] == "op" and self.peek()[1] in ("==", "<", "<="):
            op = self.next()[1]
            node = Binary(op, node, self.add_expr())
        return node

    def add_expr(self) -> Expr:
        node = self.mul_expr()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            node = Binary(op, node, self.mul_expr())
        return node

    def mul_expr(self) -> Expr:
        node = self.unary_expr()
        while self.peek() == ("op", "*"):
            self.next()
            node = Binary("*", node, self.unary_expr())
        return node

    def unary_expr(self) -> Expr:
        kind, text = self.peek()
        if kind == "op" and text in ("-", "!"):
            self.next()
            return Unary(text, self.unary_expr())
        return self.atom()

    def atom(self) -> Expr:
        kind, text = self.next()
        if kind == "int":
            return Lit(int(text))
        if kind == "ident":
            if text == "ite":
                self.expect("(")
                cond = self.or_expr()
                self.expect(",")
                then = self.or_expr()
                self.expect(",")
                other = self.or_expr()
                self.expect(")")
                return Ite(cond, then, other)
            if text == "table":
                return self.table()
            return Var(text)
        if (kind, text) == ("op", "("):
            node = self.or_expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected token {text or 'end of input'!r} in {self.text!r}")

    def table(self) -> Expr:
        self.expect("(")
        names = [self._ident()]
        while self.peek() == ("op", ","):
            self.next()
            names.append(self._ident())
        self.expect(")")
        self.expect("[")
        entries = {}
        while True:
            key = self._int_tuple()
            self.expect("->")
            kind, text = self.next()
            neg = False
            if (kind, text) == ("op", "-"):
                neg = True
                kind, text = self.next()
            if kind != "int":
                raise ParseError(f"expected integer table output, got {text!r}")
            out = -int(text) if neg else int(text)
            if len(key) != len(names):
                raise ParseError(
                    f"table entry {key} has {len(key)} values for {len(names)} variables"
                )
            if key in entries:
                raise ParseError(f"duplicate table entry for {key}")
            entries[key] = out
            kind, text = self.next()
            if (kind, text) == ("op", "]"):
                break
            if (kind, text) != ("op", ","):
                raise ParseError(f"expected ',' or ']' in table, got {text!r}")
        return Table.from_mapping(names, entries)

    def _ident(self) -> str:
        kind, text = self.next()
        if kind != "ident" or text in _KEYWORDS:
            raise ParseError(f"expected identifier, got {text!r}")
        return text

    def _int_tuple(self) -> tuple[int, ...]:
        self.expect("(")
        values = [self._signed_int()]
        while self.peek() == ("op", ","):
            self.next()
            values.append(self._signed_int())
        self.expect(")")
        return tuple(values)

    def _signed_int(self) -> int:
        kind, text = self.next()
        neg = False
        if (kind, text) == ("op", "-"):
            neg = True
            kind, text = self.next()
        if kind != "int":
            raise ParseError(f"expected integer, got {text!r}")
        return -int(text) if neg else int(text)


def parse_expr(text: str) -> Expr:
    """Parse the equation grammar into an expression tree."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Writing

_PRECEDENCE = {"||": 1, "&&": 2, "==": 3, "<": 3, "<=": 3, "+": 4, "-": 4, "*": 5}


def to_source(expr: Expr) -> str:
    """Render an expression back to grammar text. parse_expr inverts this."""
    return _render(expr, 0)


def _render(expr: Expr, parent_prec: int) -> str:
    if isinstance(expr, Lit):
        return str(expr.value) if expr.value >= 0 else f"(-{-expr.value})"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Unary):
        return f"{expr.op}{_render(expr.arg, 6)}"
    if isinstance(expr, Binary):
        prec = _PRECEDENCE[expr.op]
        text = f"{_render(expr.left, prec)} {expr.op} {_render(expr.right, prec + 1)}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(expr, Ite):
        parts = (_render(expr.cond, 0), _render(expr.then, 0), _render(expr.other, 0))
        return "ite({}, {}, {})".format(*parts)
    if isinstance(expr, Table):
        entries = ", ".join(
            "({}) -> {}".format(", ".join(str(v) for v in key), out)
            for key, out in expr.entries
        )
        return "table({})[{}]".format(", ".join(expr.vars), entries)
    raise TypeError(f"not an expression: {expr!r}")
