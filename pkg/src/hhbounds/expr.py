"""Arithmetic expression language with plain and dual-number evaluation.

Grammar (whitespace is ignored, there is no implicit multiplication):

    expr   := term  (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?            right associative
    atom   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := 'exp' | 'ln' | 'sin' | 'cos' | 'sqrt' | 'abs'

``^`` binds tighter than unary minus, so ``-x^2`` means ``-(x^2)`` while
``x^-2`` means ``x^(-2)``. Numbers are IEEE doubles in decimal notation with
an optional scientific exponent.

Evaluation is IEEE double precision throughout and accepts either a float or
a numpy array for the variable. ``evaluate_dual`` propagates dual numbers
(value, derivative) through the tree, which yields exact forward-mode
derivatives; at an ``abs`` kink the derivative convention is 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

Scalar = Union[float, np.ndarray]

__all__ = [
    "Constant",
    "Variable",
    "Unary",
    "Binary",
    "Expr",
    "DualValue",
    "ExprError",
    "ExprSyntaxError",
    "UnknownIdentifierError",
    "EvalDomainError",
    "parse",
    "unparse",
    "evaluate",
    "evaluate_dual",
    "abs_kink_points",
    "has_abs_kink_at",
]

UNARY_FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt", "abs")


class ExprError(ValueError):
    """Base class for expression parsing and evaluation failures."""


class ExprSyntaxError(ExprError):
    """Malformed source text. ``offset`` is 1-based; ``expected`` is a hint."""

    def __init__(self, message: str, offset: int, expected: str | None = None):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset
        self.expected = expected


class UnknownIdentifierError(ExprError):
    """An identifier that is neither ``x`` nor a known function name."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} (offset {offset})")
        self.name = name
        self.offset = offset


class EvalDomainError(ExprError):
    """Evaluation left the domain of a sub-expression (ln, sqrt, /, ^)."""

    def __init__(self, message: str, node: "Expr", x):
        super().__init__(f"{message} in {unparse(node)!r} at x={x!r}")
        self.node = node
        self.x = x


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Variable:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or a name from UNARY_FUNCTIONS
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


Expr = Union[Constant, Variable, Unary, Binary]


# ---------------------------------------------------------------------------
# tokenizing / parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, 1-based offset) triples plus a trailing 'end'."""
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            # skip leading whitespace manually to locate the bad character
            stripped = source[pos:].lstrip()
            bad_at = pos + (len(source[pos:]) - len(stripped)) + 1
            if not stripped:
                break
            raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", bad_at)
        kind = m.lastgroup
        text = m.group(kind)
        tokens.append((kind, text, m.start(kind) + 1))
        pos = m.end()
    tokens.append(("end", "", len(source) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, offset = self.peek()
        if kind == "op" and text == op:
            return self.advance()
        raise ExprSyntaxError(
            f"expected {op!r}", offset, expected=op
        )

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Binary(text, node, self.parse_term())
            else:
                return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Binary(text, node, self.parse_unary())
            else:
                return node

    def parse_unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Unary("neg", self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        node = self.parse_atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # exponent admits unary minus and chains right-associatively
            return Binary("^", node, self.parse_unary())
        return node

    def parse_atom(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == "number":
            return Constant(float(text))
        if kind == "ident":
            if text == "x":
                return Variable()
            if text in UNARY_FUNCTIONS:
                self.expect_op("(")
                inner = self.parse_expr()
                self.expect_op(")")
                return Unary(text, inner)
            raise UnknownIdentifierError(text, offset)
        if kind == "op" and text == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        what = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(
            f"expected a number, 'x', a function call or '(', got {what}",
            offset,
            expected="operand",
        )


def parse(source: str) -> Expr:
    """Parse ``source`` into an AST, or raise ExprSyntaxError with offset."""
    if not isinstance(source, str) or not source.strip():
        raise ExprSyntaxError("empty expression", 1)
    parser = _Parser(_tokenize(source))
    node = parser.parse_expr()
    kind, text, offset = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected trailing {text!r}", offset)
    return node


# ---------------------------------------------------------------------------
# unparsing

_BINARY_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG_PRECEDENCE = 3


def unparse(e: Expr) -> str:
    """Render an AST back to source; ``parse(unparse(e))`` is structurally ``e``."""
    return _unparse(e, 0)


def _unparse(e: Expr, context: int) -> str:
    if isinstance(e, Constant):
        return repr(e.value)
    if isinstance(e, Variable):
        return "x"
    if isinstance(e, Unary):
        if e.op == "neg":
            s = "-" + _unparse(e.child, _NEG_PRECEDENCE)
            return f"({s})" if _NEG_PRECEDENCE < context else s
        return f"{e.op}({_unparse(e.child, 0)})"
    prec = _BINARY_PRECEDENCE[e.op]
    if e.op == "^":
        s = f"{_unparse(e.left, prec + 1)}^{_unparse(e.right, _NEG_PRECEDENCE)}"
    else:
        s = f"{_unparse(e.left, prec)} {e.op} {_unparse(e.right, prec + 1)}"
    return f"({s})" if prec < context else s


# ---------------------------------------------------------------------------
# evaluation

@dataclass(frozen=True)
class DualValue:
    """First-order dual number: value plus derivative, both IEEE doubles.

    Arithmetic follows the dual rules, e.g. (u,u')*(v,v') = (uv, u'v + uv').
    Components may also be numpy arrays of matching shape.
    """

    value: Scalar
    deriv: Scalar

    def __add__(self, other: "DualValue") -> "DualValue":
        return DualValue(self.value + other.value, self.deriv + other.deriv)

    def __sub__(self, other: "DualValue") -> "DualValue":
        return DualValue(self.value - other.value, self.deriv - other.deriv)

    def __mul__(self, other: "DualValue") -> "DualValue":
        return DualValue(
            self.value * other.value,
            self.deriv * other.value + self.value * other.deriv,
        )

    def __truediv__(self, other: "DualValue") -> "DualValue":
        return DualValue(
            self.value / other.value,
            (self.deriv * other.value - self.value * other.deriv)
            / (other.value * other.value),
        )

    def __neg__(self) -> "DualValue":
        return DualValue(-self.value, -self.deriv)


def _contains_variable(e: Expr) -> bool:
    if isinstance(e, Variable):
        return True
    if isinstance(e, Unary):
        return _contains_variable(e.child)
    if isinstance(e, Binary):
        return _contains_variable(e.left) or _contains_variable(e.right)
    return False


def _constant_exponent(e: Expr):
    """Value of a variable-free exponent subtree, else None."""
    if not _contains_variable(e):
        return evaluate(e, 0.0)
    return None


def _int_pow(u, n: int):
    """u**n by repeated multiplication; valid for negative bases."""
    if n < 0:
        return 1.0 / _int_pow(u, -n)
    result = None
    base = u
    k = n
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    if result is None:  # n == 0
        return u * 0.0 + 1.0
    return result


def _first_offender(x, mask):
    """A representative input where ``mask`` holds, for error messages."""
    arr = np.broadcast_to(np.asarray(x, dtype=float), np.shape(mask))
    if arr.ndim == 0:
        return float(arr)
    return float(arr[np.unravel_index(np.argmax(mask), np.shape(mask))])


def _check(mask, message: str, node: Expr, x):
    if np.any(mask):
        raise EvalDomainError(message, node, _first_offender(x, mask))


def evaluate(e: Expr, x: Scalar) -> Scalar:
    """Evaluate ``e`` at ``x``. Raises EvalDomainError outside the domain."""
    result = _eval(e, x)
    if isinstance(x, np.ndarray):
        return result
    return float(result)


def _eval(e: Expr, x: Scalar):
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, Variable):
        return x
    if isinstance(e, Unary):
        v = _eval(e.child, x)
        if e.op == "neg":
            return -v
        if e.op == "exp":
            return np.exp(v)
        if e.op == "ln":
            _check(np.logical_not(v > 0), "ln of non-positive value", e, v)
            return np.log(v)
        if e.op == "sin":
            return np.sin(v)
        if e.op == "cos":
            return np.cos(v)
        if e.op == "sqrt":
            _check(v < 0, "sqrt of negative value", e, v)
            return np.sqrt(v)
        if e.op == "abs":
            return np.abs(v)
        raise AssertionError(e.op)
    u = _eval(e.left, x)
    if e.op == "+":
        return u + _eval(e.right, x)
    if e.op == "-":
        return u - _eval(e.right, x)
    if e.op == "*":
        return u * _eval(e.right, x)
    if e.op == "/":
        v = _eval(e.right, x)
        _check(v == 0, "division by zero", e, u)
        return u / v
    if e.op == "^":
        cv = _constant_exponent(e.right)
        if cv is not None and float(cv).is_integer():
            n = int(cv)
            if n < 0:
                _check(u == 0, "zero base with negative exponent", e, u)
            return _int_pow(u, n)
        v = _eval(e.right, x)
        _check(np.logical_not(u > 0), "non-positive base with non-integer exponent", e, u)
        return np.exp(v * np.log(u))
    raise AssertionError(e.op)


def evaluate_dual(e: Expr, x: Scalar) -> DualValue:
    """Evaluate value and forward-mode derivative of ``e`` at ``x``.

    The value component equals ``evaluate(e, x)`` exactly. Conventions:
    deriv(abs) = 0 at the kink; ``u^v`` with a non-integer or non-constant
    exponent is exp(v*ln u) and requires u > 0.
    """
    d = _eval_dual(e, x)
    if isinstance(x, np.ndarray):
        return d
    return DualValue(float(np.asarray(d.value)), float(np.asarray(d.deriv)))


def _eval_dual(e: Expr, x: Scalar) -> DualValue:
    if isinstance(e, Constant):
        return DualValue(e.value, 0.0)
    if isinstance(e, Variable):
        return DualValue(x, x * 0.0 + 1.0)
    if isinstance(e, Unary):
        d = _eval_dual(e.child, x)
        v = d.value
        if e.op == "neg":
            return -d
        if e.op == "exp":
            ev = np.exp(v)
            return DualValue(ev, ev * d.deriv)
        if e.op == "ln":
            _check(np.logical_not(v > 0), "ln of non-positive value", e, v)
            return DualValue(np.log(v), d.deriv / v)
        if e.op == "sin":
            return DualValue(np.sin(v), np.cos(v) * d.deriv)
        if e.op == "cos":
            return DualValue(np.cos(v), -np.sin(v) * d.deriv)
        if e.op == "sqrt":
            _check(v < 0, "sqrt of negative value", e, v)
            _check(v == 0, "sqrt derivative at zero", e, v)
            s = np.sqrt(v)
            return DualValue(s, d.deriv / (2.0 * s))
        if e.op == "abs":
            # sign(0) = 0 implements the stated kink convention
            return DualValue(np.abs(v), np.sign(v) * d.deriv)
        raise AssertionError(e.op)
    a = _eval_dual(e.left, x)
    if e.op == "+":
        return a + _eval_dual(e.right, x)
    if e.op == "-":
        return a - _eval_dual(e.right, x)
    if e.op == "*":
        return a * _eval_dual(e.right, x)
    if e.op == "/":
        b = _eval_dual(e.right, x)
        _check(b.value == 0, "division by zero", e, a.value)
        return a / b
    if e.op == "^":
        u = a.value
        cv = _constant_exponent(e.right)
        if cv is not None and float(cv).is_integer():
            n = int(cv)
            if n < 0:
                _check(u == 0, "zero base with negative exponent", e, u)
            value = _int_pow(u, n)
            if n == 0:
                return DualValue(value, u * 0.0)
            return DualValue(value, float(n) * _int_pow(u, n - 1) * a.deriv)
        b = _eval_dual(e.right, x)
        _check(np.logical_not(u > 0), "non-positive base with non-integer exponent", e, u)
        lnu = np.log(u)
        value = np.exp(b.value * lnu)
        return DualValue(value, value * (b.deriv * lnu + b.value * a.deriv / u))
    raise AssertionError(e.op)


# ---------------------------------------------------------------------------
# kink location for abs-bearing expressions

def _is_linear_in_x(e: Expr) -> bool:
    if not _contains_variable(e):
        return True
    if isinstance(e, Variable):
        return True
    if isinstance(e, Unary) and e.op == "neg":
        return _is_linear_in_x(e.child)
    if isinstance(e, Binary):
        if e.op in "+-":
            return _is_linear_in_x(e.left) and _is_linear_in_x(e.right)
        if e.op == "*":
            return (not _contains_variable(e.left) and _is_linear_in_x(e.right)) or (
                not _contains_variable(e.right) and _is_linear_in_x(e.left)
            )
        if e.op == "/":
            return _is_linear_in_x(e.left) and not _contains_variable(e.right)
    return False


def abs_kink_points(e: Expr, lo: float, hi: float) -> list[float]:
    """Roots in (lo, hi) of linear ``abs`` arguments, sorted ascending.

    Only linear arguments are solved for; kinks of nonlinear arguments are
    left to adaptive refinement.
    """
    points: set[float] = set()

    def walk(node: Expr):
        if isinstance(node, Unary):
            if node.op == "abs" and _contains_variable(node.child):
                if _is_linear_in_x(node.child):
                    intercept = evaluate(node.child, 0.0)
                    slope = evaluate_dual(node.child, 0.0).deriv
                    if slope != 0.0:
                        root = -intercept / slope
                        if lo < root < hi:
                            points.add(root)
            walk(node.child)
        elif isinstance(node, Binary):
            walk(node.left)
            walk(node.right)

    walk(e)
    return sorted(points)


def has_abs_kink_at(e: Expr, x: float) -> bool:
    """True when some abs argument of ``e`` evaluates to exactly 0 at ``x``."""

    def walk(node: Expr) -> bool:
        if isinstance(node, Unary):
            if node.op == "abs" and _contains_variable(node.child):
                if evaluate(node.child, x) == 0.0:
                    return True
            return walk(node.child)
        if isinstance(node, Binary):
            return walk(node.left) or walk(node.right)
        return False

    return walk(e)
