"""A small arithmetic-expression compiler for user-supplied charts.

Grammar: identifiers (chart parameters and the constants pi, e), decimal
literals, ``+ - * / ^`` with usual precedence (``^`` binds tightest and is
right-associative), unary minus, parentheses, and the call forms
``sin cos sinh cosh exp log sqrt``. Expressions compile to vectorized
numpy evaluators over named parameter columns.
"""

from __future__ import annotations

import re
from typing import Callable, Dict, List, Sequence

import numpy as np

from .diffcalc import SmoothMap
from .errors import ExprError

FUNCTIONS: Dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
}

CONSTANTS = {"pi": np.pi, "e": np.e}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> List[tuple]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprError(f"unexpected character {text[pos]!r} at position {pos} in {text!r}")
        if m.lastgroup == "num":
            tokens.append(("num", float(m.group("num"))))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    """Recursive descent over +- / */ / unary- / ^ / atoms."""

    def __init__(self, text: str, params: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.params = list(params)

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        node = self.sum()
        if self.peek()[0] != "end":
            raise ExprError(f"trailing input in {self.text!r}")
        return node

    def sum(self):
        node = self.product()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.product()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def product(self):
        node = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            return ("pow", base, self.unary())
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("const", val)
        if kind == "name":
            if self.peek() == ("op", "("):
                if val not in FUNCTIONS:
                    raise ExprError(f"unknown function {val!r} in {self.text!r}")
                self.take()
                arg = self.sum()
                self.expect_op(")")
                return ("call", val, arg)
            if val in CONSTANTS:
                return ("const", CONSTANTS[val])
            if val in self.params:
                return ("param", self.params.index(val))
            raise ExprError(f"unknown identifier {val!r} in {self.text!r} "
                            f"(parameters: {', '.join(self.params)})")
        if kind == "op" and val == "(":
            node = self.sum()
            self.expect_op(")")
            return node
        raise ExprError(f"unexpected token in {self.text!r}")


def _evaluate(node, cols: np.ndarray):
    tag = node[0]
    if tag == "const":
        return node[1]
    if tag == "param":
        return cols[:, node[1]]
    if tag == "neg":
        return -_evaluate(node[1], cols)
    if tag == "call":
        return FUNCTIONS[node[1]](_evaluate(node[2], cols))
    a = _evaluate(node[1], cols)
    b = _evaluate(node[2], cols)
    if tag == "add":
        return a + b
    if tag == "sub":
        return a - b
    if tag == "mul":
        return a * b
    if tag == "div":
        return a / b
    return np.power(a, b)


def compile_expression(text: str, params: Sequence[str]) -> Callable[[np.ndarray], np.ndarray]:
    """Compile one expression to a vectorized function of parameter columns."""
    node = _Parser(str(text), params).parse()

    def fn(cols: np.ndarray) -> np.ndarray:
        out = _evaluate(node, np.atleast_2d(cols))
        return np.broadcast_to(out, (np.atleast_2d(cols).shape[0],)).astype(float)

    return fn


def chart_from_expressions(params: Sequence[str], coords: Sequence[str],
                           domain=None, name: str = "expression chart") -> SmoothMap:
    """Build a chart SmoothMap from one expression per ambient coordinate."""
    if len(set(params)) != len(params):
        raise ExprError("chart parameters must be distinct")
    fns = [compile_expression(c, params) for c in coords]

    def evaluate(P: np.ndarray) -> np.ndarray:
        P = np.atleast_2d(P)
        return np.stack([fn(P) for fn in fns], axis=1)

    return SmoothMap(evaluate, len(params), len(coords), domain=domain, name=name)
