"""A small arithmetic language for coefficient functions of the single variable x.

Grammar (EBNF)::

    expr    = term , { ("+" | "-") , term } ;
    term    = unary , { ("*" | "/") , unary } ;
    unary   = "-" , unary | power ;
    power   = primary , [ "^" , unary ] ;          (* right-associative *)
    primary = number | "x" | "pi"
            | func , "(" , expr , { "," , expr } , ")"
            | "(" , expr , ")" ;
    func    = "sin" | "cos" | "exp" | "sqrt" | "abs" | "min" | "max" ;
    number  = digits , [ "." , [ digits ] ] , [ exponent ]
            | "." , digits , [ exponent ] ;
    exponent = ("e" | "E") , [ "+" | "-" ] , digits ;

Whitespace between tokens is ignored. Offsets reported in errors are byte
offsets into the UTF-8 encoding of the source.
"""

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from funceq.exceptions import EvaluationError, ParseError

FUNCTIONS: dict[str, int] = {
    "sin": 1,
    "cos": 1,
    "exp": 1,
    "sqrt": 1,
    "abs": 1,
    "min": 2,
    "max": 2,
}
CONSTANTS: dict[str, float] = {"pi": math.pi}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]


Node = Union[Num, Var, Const, Neg, BinOp, Call]


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "ident", "op" or "end"
    text: str
    offset: int

    def describe(self) -> str:
        if self.kind == "end":
            return "end of input"
        return f"{self.kind} '{self.text}'"


def tokenize(source: str) -> list[Token]:
    """Split source text into tokens carrying byte offsets."""
    tokens: list[Token] = []
    pos = 0
    byte_pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise ParseError(byte_pos, "a number, x, pi, a function or an operator", f"'{source[pos]}'")
        kind = match.lastgroup
        text = match.group()
        if kind != "ws":
            tokens.append(Token(kind, text, byte_pos))
        pos = match.end()
        byte_pos += len(text.encode("utf-8"))
    tokens.append(Token("end", "", byte_pos))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "end":
            self.pos += 1
        return token

    def at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            raise ParseError(self.current.offset, f"'{op}'", self.current.describe())
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "end":
            raise ParseError(self.current.offset, "end of input", self.current.describe())
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.at_op("-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.at_op("^"):
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Node:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Num(float(token.text))
        if token.kind == "ident":
            self.advance()
            if token.text == "x":
                return Var()
            if token.text in CONSTANTS:
                return Const(token.text)
            if token.text in FUNCTIONS:
                return self.call(token)
            raise ParseError(token.offset, "x, pi or a function name", f"unknown identifier '{token.text}'")
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(token.offset, "a number, x, pi, a function or '('", token.describe())

    def call(self, name: Token) -> Node:
        self.expect_op("(")
        args = [self.expr()]
        while self.at_op(","):
            self.advance()
            args.append(self.expr())
        self.expect_op(")")
        arity = FUNCTIONS[name.text]
        if len(args) != arity:
            raise ParseError(
                name.offset,
                f"{arity} argument(s) for {name.text}",
                f"{len(args)} argument(s)",
            )
        return Call(name.text, tuple(args))


def parse(source: str) -> Node:
    """Parse expression text into an AST.

    Raises:
        ParseError: With the byte offset, what was expected and what was found.
    """
    parser = _Parser(source)
    try:
        return parser.parse()
    except RecursionError:
        raise ParseError(parser.current.offset, "shallower nesting", "nesting too deep") from None


def to_source(node: Node) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    return f"{node.name}({', '.join(to_source(a) for a in node.args)})"


def _first_offender(mask, x):
    if np.ndim(x) == 0:
        return float(x)
    mask = np.broadcast_to(mask, np.shape(x))
    return float(np.asarray(x)[mask][0])


def _eval(node: Node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, BinOp):
        left = _eval(node.left, x)
        right = _eval(node.right, x)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            zero = np.asarray(right) == 0
            if np.any(zero):
                raise EvaluationError("division by zero", _first_offender(zero, x))
            return np.divide(left, right)
        base = np.asarray(left, dtype=np.float64)
        exponent = np.asarray(right, dtype=np.float64)
        complex_valued = (base < 0) & (exponent != np.round(exponent))
        if np.any(complex_valued):
            raise EvaluationError(
                "negative base with non-integer exponent", _first_offender(complex_valued, x)
            )
        pole = (base == 0) & (exponent < 0)
        if np.any(pole):
            raise EvaluationError("division by zero", _first_offender(pole, x))
        return np.power(base, exponent)
    args = [_eval(a, x) for a in node.args]
    if node.name == "sqrt":
        negative = np.asarray(args[0]) < 0
        if np.any(negative):
            raise EvaluationError("square root of a negative number", _first_offender(negative, x))
        return np.sqrt(args[0])
    if node.name == "min":
        return np.minimum(args[0], args[1])
    if node.name == "max":
        return np.maximum(args[0], args[1])
    return {"sin": np.sin, "cos": np.cos, "exp": np.exp, "abs": np.abs}[node.name](args[0])


def eval_ast(node: Node, x):
    """Evaluate an AST at a point or, elementwise, at an array of points.

    Raises:
        EvaluationError: On division by zero, square roots of negatives,
            complex-valued powers or overflow, carrying the offending x.
    """
    with np.errstate(all="ignore"):
        result = np.asarray(_eval(node, x), dtype=np.float64)
    finite = np.isfinite(result)
    if not np.all(finite):
        raise EvaluationError("non-finite result", _first_offender(~finite, x))
    if np.ndim(x) == 0:
        return float(result)
    return np.array(np.broadcast_to(result, np.shape(x)))


class Expression:
    """Parsed expression usable wherever a coefficient function is expected."""

    def __init__(self, source: str):
        self.source = source
        self.ast = parse(source)

    def __call__(self, x):
        return eval_ast(self.ast, x)

    def __repr__(self) -> str:
        return f"Expression({self.source!r})"
