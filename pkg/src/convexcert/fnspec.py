"""Single-variable expression language with an attached domain interval.

Grammar (whitespace insignificant, ``^`` right-associative and binding
tighter than unary minus)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 'x' | 'pi' | 'e' | NAME '(' expr ')' | '(' expr ')'

Example
-------
>>> f = parse_function("x^2 - 1", Interval.closed(-2, 2))
>>> f(3.0)
Traceback (most recent call last):
    ...
convexcert.errors.DomainError: x=3 outside [-2, 2]
>>> f(1.5)
1.25
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ArityError, DomainError, ParseError, UnknownIdentifier

__all__ = [
    "Interval",
    "Num",
    "Var",
    "Const",
    "Neg",
    "BinOp",
    "Call",
    "FunctionSpec",
    "parse_expr",
    "parse_function",
    "to_text",
    "evaluate",
    "evaluate_many",
    "negate",
    "reflect",
    "parse_interval",
]


# ---------------------------------------------------------------------------
# Interval
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if (math.isinf(self.lo) and self.lo_closed) or (math.isinf(self.hi) and self.hi_closed):
            raise ValueError("an infinite endpoint cannot be closed")

    @classmethod
    def closed(cls, lo, hi) -> Interval:
        return cls(float(lo), float(hi), True, True)

    @classmethod
    def open(cls, lo, hi) -> Interval:
        return cls(float(lo), float(hi), False, False)

    @classmethod
    def real_line(cls) -> Interval:
        return cls(-math.inf, math.inf, False, False)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        if x != x:  # NaN
            return False
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return bool(above and below)

    __contains__ = contains

    def contains_all(self, xs) -> bool:
        xs = np.asarray(xs, dtype=float)
        above = xs >= self.lo if self.lo_closed else xs > self.lo
        below = xs <= self.hi if self.hi_closed else xs < self.hi
        return bool(np.all(above & below))

    def issubset(self, other: Interval) -> bool:
        if self.lo < other.lo or (self.lo == other.lo and self.lo_closed and not other.lo_closed):
            return False
        if self.hi > other.hi or (self.hi == other.hi and self.hi_closed and not other.hi_closed):
            return False
        return True

    def reflected(self) -> Interval:
        return Interval(-self.hi, -self.lo, self.hi_closed, self.lo_closed)

    def __str__(self):
        def fmt(v):
            if math.isinf(v):
                return "inf" if v > 0 else "-inf"
            return f"{v:g}"

        return (
            ("[" if self.lo_closed else "(")
            + f"{fmt(self.lo)}, {fmt(self.hi)}"
            + ("]" if self.hi_closed else ")")
        )


def parse_interval(text: str) -> Interval:
    """Parse ``"lo,hi"`` or bracketed ``"(lo,hi]"``.

    Without brackets finite endpoints are closed; ``inf``/``-inf`` are
    always open.
    """
    body = text.strip()
    lo_closed = hi_closed = None
    if body[:1] in "([":
        lo_closed, body = body[0] == "[", body[1:]
    if body[-1:] in ")]":
        hi_closed, body = body[-1] == "]", body[:-1]
    parts = [p.strip() for p in body.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'lo,hi', got {text!r}")
    lo, hi = (float(p) for p in parts)
    lo_closed = math.isfinite(lo) and (True if lo_closed is None else lo_closed)
    hi_closed = math.isfinite(hi) and (True if hi_closed is None else hi_closed)
    return Interval(lo, hi, lo_closed, hi_closed)


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Neg:
    operand: Node


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: Node
    right: Node


@dataclass(frozen=True)
class Call:
    name: str
    arg: Node


Node = Union[Num, Var, Const, Neg, BinOp, Call]

CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = ("sin", "cos", "exp", "log", "abs", "sqrt", "arcsin", "arctan")


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str  # num, name, op, end
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(_Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


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

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind != "op":
            raise ParseError(f"expected {text!r}, found {self._describe()}", self.tok.offset)
        return self.advance()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe()}", self.tok.offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            value = float(tok.text)
            if not math.isfinite(value):
                raise ParseError(f"numeric literal {tok.text!r} overflows", tok.offset)
            return Num(value)
        if tok.kind == "name":
            self.advance()
            if tok.text == "x":
                return Var()
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                self.expect("(")
                if self.tok.kind == "op" and self.tok.text == ")":
                    raise ArityError(f"{tok.text} takes exactly one argument", self.tok.offset)
                arg = self.expr()
                if self.tok.kind == "op" and self.tok.text == ",":
                    raise ArityError(f"{tok.text} takes exactly one argument", self.tok.offset)
                self.expect(")")
                return Call(tok.text, arg)
            raise UnknownIdentifier(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {self._describe()}", tok.offset)


def parse_expr(text: str) -> Node:
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

# binding levels: 1 additive, 2 multiplicative, 3 unary, 4 power, 5 atom
_LEVEL = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _level(node: Node) -> int:
    if isinstance(node, BinOp):
        return _LEVEL[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Num) and (node.value < 0 or math.copysign(1.0, node.value) < 0):
        return 0
    return 5


def _wrap(node: Node, min_level: int) -> str:
    s = to_text(node)
    return s if _level(node) >= min_level else f"({s})"


def to_text(node: Node) -> str:
    """Print with the minimum parentheses needed to re-parse to the same tree."""
    if isinstance(node, Num):
        v = node.value
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v))
        return repr(v)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, 3)
    if isinstance(node, Call):
        return f"{node.name}({to_text(node.arg)})"
    if isinstance(node, BinOp):
        if node.op == "^":
            return f"{_wrap(node.left, 5)}^{_wrap(node.right, 3)}"
        lvl = _LEVEL[node.op]
        return f"{_wrap(node.left, lvl)} {node.op} {_wrap(node.right, lvl + 1)}"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _call_scalar(name: str, v: float) -> float:
    if name == "log":
        if v <= 0:
            raise DomainError(f"log of non-positive value {v}")
        return math.log(v)
    if name == "sqrt":
        if v < 0:
            raise DomainError(f"sqrt of negative value {v}")
        return math.sqrt(v)
    if name == "arcsin":
        if abs(v) > 1:
            raise DomainError(f"arcsin of {v} outside [-1, 1]")
        return math.asin(v)
    if name == "exp":
        try:
            return math.exp(v)
        except OverflowError:
            raise DomainError(f"exp({v}) overflows") from None
    return {"sin": math.sin, "cos": math.cos, "abs": abs, "arctan": math.atan}[name](v)


def _eval_scalar(node: Node, x: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval_scalar(node.operand, x)
    if isinstance(node, Call):
        return _call_scalar(node.name, _eval_scalar(node.arg, x))
    left = _eval_scalar(node.left, x)
    right = _eval_scalar(node.right, x)
    op = node.op
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        if right == 0:
            raise DomainError("division by zero")
        return left / right
    # math.pow rejects negative bases with non-integer exponents and 0 ** negative
    try:
        return math.pow(left, right)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"{left}^{right} is not a real number") from None
    except OverflowError:
        raise DomainError(f"{left}^{right} overflows") from None


_NP_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
    "abs": np.abs,
    "sqrt": np.sqrt,
    "arcsin": np.arcsin,
    "arctan": np.arctan,
}

_NP_OPS = {"+": np.add, "-": np.subtract, "*": np.multiply, "/": np.divide, "^": np.power}


def _eval_array(node: Node, xs: np.ndarray) -> np.ndarray:
    if isinstance(node, Num):
        return np.full_like(xs, node.value)
    if isinstance(node, Var):
        return xs
    if isinstance(node, Const):
        return np.full_like(xs, CONSTANTS[node.name])
    if isinstance(node, Neg):
        return -_eval_array(node.operand, xs)
    if isinstance(node, Call):
        arg = _eval_array(node.arg, xs)
        if node.name == "log":
            # log(0) is -inf, never a real value
            arg = np.where(arg > 0, arg, np.nan)
        return _NP_FUNCS[node.name](arg)
    return _NP_OPS[node.op](_eval_array(node.left, xs), _eval_array(node.right, xs))


# ---------------------------------------------------------------------------
# FunctionSpec
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionSpec:
    ast: Node
    domain: Interval = field(default_factory=Interval.real_line)
    source_text: str = ""

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def many(self, xs) -> np.ndarray:
        return evaluate_many(self, xs)

    def __str__(self):
        return f"{self.source_text or to_text(self.ast)} on {self.domain}"


def parse_function(text: str, domain: Interval | None = None) -> FunctionSpec:
    ast = parse_expr(text)
    return FunctionSpec(ast, domain if domain is not None else Interval.real_line(), text)


def evaluate(f: FunctionSpec, x: float) -> float:
    x = float(x)
    if not f.domain.contains(x):
        raise DomainError(f"x={x:g} outside {f.domain}")
    value = _eval_scalar(f.ast, x)
    if not math.isfinite(value):
        raise DomainError(f"non-finite value at x={x:g}")
    return value


def evaluate_many(f: FunctionSpec, xs) -> np.ndarray:
    """Vectorized evaluation; raises DomainError if any point is invalid."""
    xs = np.asarray(xs, dtype=float)
    if not f.domain.contains_all(xs):
        raise DomainError(f"some points lie outside {f.domain}")
    with np.errstate(all="ignore"):
        out = _eval_array(f.ast, xs)
    out = np.asarray(out, dtype=float)
    if not np.all(np.isfinite(out)):
        bad = xs[~np.isfinite(out)].ravel()[0]
        raise DomainError(f"expression leaves the reals at x={bad:g}")
    return out


def negate(f: FunctionSpec) -> FunctionSpec:
    """The pointwise negative, on the same domain."""
    return FunctionSpec(Neg(f.ast), f.domain, f"-({f.source_text or to_text(f.ast)})")


def _substitute_neg_x(node: Node) -> Node:
    if isinstance(node, Var):
        return Neg(Var())
    if isinstance(node, Neg):
        return Neg(_substitute_neg_x(node.operand))
    if isinstance(node, Call):
        return Call(node.name, _substitute_neg_x(node.arg))
    if isinstance(node, BinOp):
        return BinOp(node.op, _substitute_neg_x(node.left), _substitute_neg_x(node.right))
    return node


def reflect(f: FunctionSpec) -> FunctionSpec:
    """x -> f(-x), defined on the reflected domain."""
    ast = _substitute_neg_x(f.ast)
    return FunctionSpec(ast, f.domain.reflected(), to_text(ast))
