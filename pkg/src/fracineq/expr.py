"""Function text -> expression tree, evaluated with forward-mode dual numbers.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := number | "x" | "pi" | "e" | ident "(" expr ")" | "(" expr ")"

``^`` is right-associative. The Unicode minus sign is accepted wherever ``-`` is.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt", "abs")
CONSTANTS = {"pi": math.pi, "e": math.e}
MAX_INT_POWER = 16


class ExprError(Exception):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, offset: int, expected: frozenset = frozenset()):
        self.offset = offset
        self.expected = expected
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{message} at byte offset {offset}{detail}")


class UnknownIdentifierError(ParseError):
    pass


class ExprDomainError(ExprError):
    def __init__(self, message: str, subexpr: str):
        self.subexpr = subexpr
        super().__init__(f"{message}: {subexpr}")


class NonDifferentiableError(ExprDomainError):
    pass


@dataclass(frozen=True)
class ExprNode:
    kind: str  # "const" | "var" | "unary" | "binary" | "call"
    tag: str = ""
    children: tuple["ExprNode", ...] = ()
    value: float = 0.0

    def __post_init__(self):
        arity = {"const": 0, "var": 0, "unary": 1, "binary": 2, "call": 1}
        if self.kind not in arity:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if len(self.children) != arity[self.kind]:
            raise ValueError(f"{self.kind} node {self.tag!r} needs {arity[self.kind]} children")
        if self.kind == "call" and self.tag not in FUNCTIONS:
            raise ValueError(f"unknown function {self.tag!r}")
        if self.kind == "binary" and self.tag not in ("+", "-", "*", "/", "^"):
            raise ValueError(f"unknown operator {self.tag!r}")
        # cached structural facts; not part of equality
        has_x = self.kind == "var" or any(c.has_x for c in self.children)
        object.__setattr__(self, "has_x", has_x)
        int_exponent = None
        if self.kind == "binary" and self.tag == "^":
            int_exponent = _constant_exponent(self.children[1])
        object.__setattr__(self, "int_exponent", int_exponent)

    def __str__(self) -> str:
        return to_text(self)


class DualValue(NamedTuple):
    value: float
    derivative: float


# ---------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()−]))"
)


class _Token(NamedTuple):
    kind: str  # "number" | "ident" | op character | "end"
    text: str
    offset: int  # byte offset into the UTF-8 source


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        offset = len(text[:pos].encode("utf-8"))
        if pos == len(text):
            tokens.append(_Token("end", "", offset))
            return tokens
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", offset)
        if m.group("number") is not None:
            tokens.append(_Token("number", m.group("number"), offset))
        elif m.group("ident") is not None:
            tokens.append(_Token("ident", m.group("ident"), offset))
        else:
            op = m.group("op").replace("−", "-")
            tokens.append(_Token(op, op, offset))
        pos = m.end()


_ATOM_START = frozenset({"number", "x", "identifier", "(", "-"})


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, expected: frozenset) -> _Token:
        if self.tok.kind != kind:
            raise ParseError(self._describe(self.tok), self.tok.offset, expected)
        return self.advance()

    @staticmethod
    def _describe(tok: _Token) -> str:
        return "unexpected end of input" if tok.kind == "end" else f"unexpected token {tok.text!r}"

    def parse(self) -> ExprNode:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(self._describe(self.tok), self.tok.offset,
                             frozenset({"+", "-", "*", "/", "^", "end of input"}))
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            node = ExprNode("binary", op, (node, self.term()))
        return node

    def term(self) -> ExprNode:
        node = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            node = ExprNode("binary", op, (node, self.factor()))
        return node

    def factor(self) -> ExprNode:
        if self.tok.kind == "-":
            self.advance()
            return ExprNode("unary", "-", (self.factor(),))
        return self.power()

    def power(self) -> ExprNode:
        base = self.atom()
        if self.tok.kind == "^":
            self.advance()
            return ExprNode("binary", "^", (base, self.factor()))
        return base

    def atom(self) -> ExprNode:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return ExprNode("const", value=float(tok.text))
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")", frozenset({")", "+", "-", "*", "/", "^"}))
            return node
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name == "x":
                return ExprNode("var", "x")
            if name in CONSTANTS:
                return ExprNode("const", name, value=CONSTANTS[name])
            if name in FUNCTIONS:
                self.expect("(", frozenset({"("}))
                arg = self.expr()
                self.expect(")", frozenset({")", "+", "-", "*", "/", "^"}))
                return ExprNode("call", name, (arg,))
            raise UnknownIdentifierError(f"unknown identifier {name!r}", tok.offset,
                                         frozenset({"x", *CONSTANTS, *FUNCTIONS}))
        raise ParseError(self._describe(tok), tok.offset, _ATOM_START)


def parse(text: str) -> ExprNode:
    """Parse function text into an :class:`ExprNode` tree.

    Raises :class:`ParseError` (with ``offset`` in bytes and the ``expected``
    token set) or :class:`UnknownIdentifierError`.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 0, _ATOM_START)
    return _Parser(text).parse()


def to_text(node: ExprNode) -> str:
    """Canonical, fully parenthesised printer; ``parse(to_text(n)) == n``."""
    if node.kind == "const":
        return node.tag or repr(node.value)
    if node.kind == "var":
        return "x"
    if node.kind == "unary":
        return f"(-{to_text(node.children[0])})"
    if node.kind == "call":
        return f"{node.tag}({to_text(node.children[0])})"
    left, right = node.children
    return f"({to_text(left)} {node.tag} {to_text(right)})"


# ---------------------------------------------------------------- evaluation
#
# One walker serves scalar floats (math backend) and numpy arrays (numpy
# backend). Values are computed identically whether or not the derivative is
# demanded, so eval and eval_dual agree bit-for-bit.


class _Backend(NamedTuple):
    exp: object
    log: object
    sin: object
    cos: object
    sqrt: object
    pow: object
    any: object


_SCALAR = _Backend(math.exp, math.log, math.sin, math.cos, math.sqrt, math.pow, bool)
_ARRAY = _Backend(np.exp, np.log, np.sin, np.cos, np.sqrt, np.power, np.any)


def _int_power(v, n: int):
    result = 1.0
    for _ in range(n):
        result = result * v
    return result


def _constant_exponent(node: ExprNode):
    """Integer value of an x-free exponent with |n| <= MAX_INT_POWER, else None."""
    if node.has_x:
        return None
    c = _walk(node, 0.0, _SCALAR, strict=False)[0]
    if c == int(c) and abs(c) <= MAX_INT_POWER:
        return int(c)
    return None


def _walk(node: ExprNode, x, be: _Backend, strict: bool):
    kind = node.kind
    if kind == "const":
        return node.value, 0.0
    if kind == "var":
        return x, 1.0
    if kind == "unary":
        v, d = _walk(node.children[0], x, be, strict)
        return -v, -d
    if kind == "binary":
        op = node.tag
        if op == "^":
            return _power(node, x, be, strict)
        v1, d1 = _walk(node.children[0], x, be, strict)
        v2, d2 = _walk(node.children[1], x, be, strict)
        if op == "+":
            return v1 + v2, d1 + d2
        if op == "-":
            return v1 - v2, d1 - d2
        if op == "*":
            return v1 * v2, d1 * v2 + v1 * d2
        if be.any(v2 == 0):
            raise ExprDomainError("division by zero", to_text(node))
        return v1 / v2, (d1 * v2 - v1 * d2) / (v2 * v2)
    return _call(node, x, be, strict)


def _power(node: ExprNode, x, be: _Backend, strict: bool):
    base, expo = node.children
    v1, d1 = _walk(base, x, be, strict)
    n = node.int_exponent
    if n is not None:
        if n < 0 and be.any(v1 == 0):
            raise ExprDomainError("zero raised to a negative power", to_text(node))
        if n == 0:
            return 1.0 + 0.0 * v1, 0.0 * d1
        m = abs(n)
        lower = _int_power(v1, m - 1)
        value = lower * v1
        deriv = m * lower * d1
        if n < 0:
            return 1.0 / value, -deriv / (value * value)
        return value, deriv
    v2, d2 = _walk(expo, x, be, strict)
    if be.any(v1 <= 0):
        raise ExprDomainError("non-integer power of a nonpositive base", to_text(node))
    try:
        value = be.pow(v1, v2)
    except OverflowError:
        raise ExprDomainError("overflow", to_text(node)) from None
    return value, value * (d2 * be.log(v1) + v2 * d1 / v1)


def _call(node: ExprNode, x, be: _Backend, strict: bool):
    name = node.tag
    v, d = _walk(node.children[0], x, be, strict)
    if name == "exp":
        try:
            value = be.exp(v)
        except OverflowError:
            raise ExprDomainError("overflow", to_text(node)) from None
        return value, value * d
    if name == "ln":
        if be.any(v <= 0):
            raise ExprDomainError("logarithm of a nonpositive value", to_text(node))
        return be.log(v), d / v
    if name == "sin":
        return be.sin(v), be.cos(v) * d
    if name == "cos":
        return be.cos(v), -be.sin(v) * d
    if name == "sqrt":
        if be.any(v < 0):
            raise ExprDomainError("square root of a negative value", to_text(node))
        value = be.sqrt(v)
        at_zero = value == 0
        if be.any(at_zero):
            if strict:
                raise NonDifferentiableError("sqrt is not differentiable at 0", to_text(node))
            if be is _SCALAR:
                return value, math.nan
            return value, np.where(at_zero, np.nan, d / (2 * np.where(at_zero, 1.0, value)))
        return value, d / (2 * value)
    # abs
    at_zero = v == 0
    if be.any(at_zero):
        if strict:
            raise NonDifferentiableError("abs is not differentiable at 0", to_text(node))
        if be is _SCALAR:
            return abs(v), math.nan
        return np.abs(v), np.where(at_zero, np.nan, np.sign(v) * d)
    if be is _SCALAR:
        return abs(v), math.copysign(1.0, v) * d
    return np.abs(v), np.sign(v) * d


@dataclass(frozen=True)
class FuncSpec:
    """A parsed function of x on the closed interval [lo, hi]."""

    source: str
    root: ExprNode = field(repr=False)
    lo: float
    hi: float

    GRID_POINTS = 257

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty domain [{self.lo}, {self.hi}]")
        for x in np.linspace(self.lo, self.hi, self.GRID_POINTS):
            v = evaluate(self, float(x))
            if not math.isfinite(v):
                raise ExprDomainError(f"non-finite value at x={float(x)!r}", self.source)

    @classmethod
    def from_text(cls, text: str, lo: float, hi: float) -> "FuncSpec":
        return cls(text, parse(text), float(lo), float(hi))

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def derivative(self, x: float) -> float:
        return evaluate_dual(self, x).derivative

    def abs_derivative(self, x):
        """|f'| at x; accepts a float or a numpy array of abscissae."""
        if isinstance(x, np.ndarray):
            return np.abs(evaluate_dual_array(self, x).derivative)
        return abs(evaluate_dual(self, x).derivative)


def evaluate(f: FuncSpec, x: float) -> float:
    """f(x); raises :class:`ExprDomainError` naming the offending subexpression."""
    return float(_walk(f.root, float(x), _SCALAR, strict=False)[0])


def evaluate_dual(f: FuncSpec, x: float) -> DualValue:
    """(f(x), f'(x)) by forward-mode differentiation seeded with dx = 1.

    abs and sqrt at a zero argument raise :class:`NonDifferentiableError`
    instead of returning a one-sided derivative.
    """
    v, d = _walk(f.root, float(x), _SCALAR, strict=True)
    return DualValue(float(v), float(d))


def evaluate_array(f: FuncSpec, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    with np.errstate(over="ignore"):
        v, _ = _walk(f.root, xs, _ARRAY, strict=False)
    return np.broadcast_to(np.asarray(v, dtype=float), xs.shape).copy()


def evaluate_dual_array(f: FuncSpec, xs) -> DualValue:
    xs = np.asarray(xs, dtype=float)
    with np.errstate(over="ignore"):
        v, d = _walk(f.root, xs, _ARRAY, strict=True)
    return DualValue(np.broadcast_to(np.asarray(v, dtype=float), xs.shape).copy(),
                     np.broadcast_to(np.asarray(d, dtype=float), xs.shape).copy())
