"""Field expressions: parse, print and evaluate to FieldElement.

Grammar, loosest binding first:

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | power
    power   := prefixed ('^' INT)?
    prefixed:= 'D'<k> ('^' INT)? prefixed | atom
    atom    := INT ('/' INT)? | 'phi' | '(' expr ')'

`a - b` parses as Add(a, Neg(b)). Derivative prefixes bind tighter than
powers, so `D0 phi^2` is (D0 phi)^2. The canonical FieldElement text
(`2*(D0^2 phi)*phi + 1`) is accepted as is.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from src.fieldring.monomials import FieldElement, apply_D_power


class ExpressionSyntaxError(ValueError):
    """Unparseable expression; `position` is the 0-based offset of the problem."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


# ----- AST ------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Phi:
    pass


@dataclass(frozen=True)
class Deriv:
    coord: int
    body: Expr
    order: int = 1
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg:
    body: Expr


Expr = Num | Phi | Deriv | Pow | Mul | Add | Neg


# ----- tokens and parser ------------------------------------------------------

_TOKEN = re.compile(r"(?P<num>\d+)|(?P<phi>phi)|(?P<deriv>D(?P<coord>\d+))|(?P<op>[-+*/^()])")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unknown symbol {text[pos]!r}", pos)
        # `phi2` or `D0x` would otherwise split silently
        end = m.end()
        if m.lastgroup in ("phi", "deriv") and end < len(text) and (text[end].isalnum() or text[end] == "_"):
            raise ExpressionSyntaxError(f"unknown symbol {text[pos:end + 1]!r}", pos)
        if m.lastgroup == "deriv":
            tokens.append(_Token("deriv", m.group("coord"), pos))
        else:
            tokens.append(_Token(m.lastgroup or "op", m.group(0), pos))
        pos = end
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]) -> None:
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def accept(self, op: str) -> bool:
        if self.current.kind == "op" and self.current.text == op:
            self.index += 1
            return True
        return False

    def integer(self, what: str) -> int:
        tok = self.current
        if tok.kind != "num":
            found = tok.text or "end of input"
            raise ExpressionSyntaxError(f"expected {what}, found {found!r}", tok.position)
        self.index += 1
        return int(tok.text)

    def parse(self) -> Expr:
        node = self.expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.current.text!r}", self.current.position)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = Add(node, self.term())
            elif self.accept("-"):
                node = Add(node, Neg(self.term()))
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while self.accept("*"):
            node = Mul(node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        node = self.prefixed()
        if self.accept("^"):
            node = Pow(node, self.integer("an exponent"))
        return node

    def prefixed(self) -> Expr:
        tok = self.current
        if tok.kind != "deriv":
            return self.atom()
        self.index += 1
        order = 1
        if self.accept("^"):
            order_pos = self.current.position
            order = self.integer("a derivative order")
            if order < 1:
                raise ExpressionSyntaxError("derivative order must be >= 1", order_pos)
        return Deriv(int(tok.text), self.prefixed(), order, tok.position)

    def atom(self) -> Expr:
        tok = self.current
        if tok.kind == "num":
            self.index += 1
            value = Fraction(int(tok.text))
            if self.accept("/"):
                den_pos = self.current.position
                den = self.integer("a denominator")
                if den == 0:
                    raise ExpressionSyntaxError("division by zero", den_pos)
                value = Fraction(int(tok.text), den)
            return Num(value)
        if tok.kind == "phi":
            self.index += 1
            return Phi()
        if self.accept("("):
            node = self.expr()
            if not self.accept(")"):
                found = self.current.text or "end of input"
                raise ExpressionSyntaxError(f"expected ')', found {found!r}", self.current.position)
            return node
        found = tok.text or "end of input"
        raise ExpressionSyntaxError(f"unexpected {found!r}", tok.position)


def parse_expression(text: str) -> Expr:
    return _Parser(_tokenize(text)).parse()


# ----- printing ---------------------------------------------------------------

_ADD, _MUL, _NEG, _POW, _DERIV, _ATOM = range(1, 7)


def _level(node: Expr) -> int:
    match node:
        case Add():
            return _ADD
        case Mul():
            return _MUL
        case Neg():
            return _NEG
        case Pow():
            return _POW
        case Deriv():
            return _DERIV
        case _:
            return _ATOM


def _wrap(node: Expr, minimum: int) -> str:
    text = print_expression(node)
    return text if _level(node) >= minimum else f"({text})"


def print_expression(node: Expr) -> str:
    """Inverse of parse_expression up to whitespace and redundant parentheses."""
    match node:
        case Num(value):
            return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
        case Phi():
            return "phi"
        case Deriv(coord, body, order):
            prefix = f"D{coord}" if order == 1 else f"D{coord}^{order}"
            return f"{prefix} {_wrap(body, _DERIV)}"
        case Pow(base, exponent):
            return f"{_wrap(base, _DERIV)}^{exponent}"
        case Neg(body):
            return f"-{_wrap(body, _NEG)}"
        case Mul(left, right):
            return f"{_wrap(left, _MUL)}*{_wrap(right, _NEG)}"
        case Add(left, Neg(body)):
            return f"{_wrap(left, _ADD)} - {_wrap(body, _MUL)}"
        case Add(left, right):
            return f"{_wrap(left, _ADD)} + {_wrap(right, _MUL)}"
    raise TypeError(f"not an expression node: {node!r}")


# ----- evaluation -------------------------------------------------------------


def evaluate(node: Expr, dim: int = 1) -> FieldElement:
    match node:
        case Num(value):
            return FieldElement.constant(value, dim)
        case Phi():
            return FieldElement.phi(dim)
        case Deriv(coord, body, order, position):
            if coord >= dim:
                raise ExpressionSyntaxError(f"D{coord} needs dimension > {coord}, got d={dim}", position)
            alpha = tuple(order if u == coord else 0 for u in range(dim))
            return apply_D_power(alpha, evaluate(body, dim))
        case Pow(base, exponent):
            return evaluate(base, dim) ** exponent
        case Neg(body):
            return -evaluate(body, dim)
        case Mul(left, right):
            return evaluate(left, dim) * evaluate(right, dim)
        case Add(left, right):
            return evaluate(left, dim) + evaluate(right, dim)
    raise TypeError(f"not an expression node: {node!r}")


def parse_element(text: str, dim: int = 1) -> FieldElement:
    return evaluate(parse_expression(text), dim)
