"""Read singular functions back from their canonical text.

Accepts the renderer's output and hand-written literals alike: rational
constants, coordinates `x1` (d = 1) or `x1_0` (d > 1), `q(...)` of a signed
sum of points, `+ - * ^` and parentheses. A negative power is only allowed
on a denominator generator, e.g. `x1^-2`, `(x1-x2)^-2` or `q(x1-x2)^-1`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from sympy import QQ

from src.singfun.errors import LiteralSyntaxError, SpecMismatchError
from src.singfun.functions import SingularFunction
from src.singfun.spaces import Factor, FactorKind, FunctionSpace, SingularitySpec, SpacetimeSpec

_TOKEN = re.compile(
    r"(?P<num>\d+)|(?P<var>x(?P<point>\d+)(?:_(?P<coord>\d+))?)|(?P<q>q)|(?P<op>[-+*^/()])"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int
    point: int = 0
    coord: int | None = None


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise LiteralSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group("var"):
            point = int(m.group("point"))
            if point < 1:
                raise LiteralSyntaxError("points are numbered from 1", pos)
            coord = m.group("coord")
            tokens.append(
                _Token("var", m.group(0), pos, point - 1, None if coord is None else int(coord))
            )
        else:
            tokens.append(_Token(m.lastgroup or "op", m.group(0), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], space: FunctionSpace) -> None:
        self.tokens = tokens
        self.index = 0
        self.space = space

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = self.current.text or "end of input"
            raise LiteralSyntaxError(f"expected {text!r}, found {found!r}", self.current.position)

    def number(self) -> int:
        tok = self.current
        if tok.kind != "num":
            raise LiteralSyntaxError("expected an integer", tok.position)
        self.index += 1
        return int(tok.text)

    def parse(self) -> SingularFunction:
        value = self.expr()
        if self.current.kind != "end":
            raise LiteralSyntaxError(f"trailing input {self.current.text!r}", self.current.position)
        return value

    def expr(self) -> SingularFunction:
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> SingularFunction:
        value = self.unary()
        while self.accept("*"):
            value = value * self.unary()
        return value

    def unary(self) -> SingularFunction:
        if self.accept("-"):
            return -self.unary()
        return self.power()

    def power(self) -> SingularFunction:
        start = self.current.position
        base = self.atom()
        if not self.accept("^"):
            return base
        negative = self.accept("-")
        k = self.number()
        if not negative:
            result = SingularFunction.one(self.space)
            for _ in range(k):
                result = result * base
            return result
        return self._inverse_power(base, k, start)

    def _inverse_power(self, base: SingularFunction, k: int, position: int) -> SingularFunction:
        poly = base.polynomial() if base.is_polynomial else None
        for factor in _factors(self.space):
            fp = self.space.factor_poly(factor)
            for sign in (1, -1):
                if poly is not None and poly == sign * fp:
                    numerator = self.space.ring.one * (sign**k)
                    return SingularFunction.from_factors(self.space, numerator, {factor: k})
        raise LiteralSyntaxError("negative powers need an allowed denominator factor", position)

    def atom(self) -> SingularFunction:
        tok = self.current
        if tok.kind == "num":
            self.index += 1
            value = int(tok.text)
            if self.accept("/"):
                den = self.number()
                if den == 0:
                    raise LiteralSyntaxError("division by zero", tok.position)
                return SingularFunction.constant(self.space, QQ(value, den))
            return SingularFunction.constant(self.space, value)
        if tok.kind == "var":
            self.index += 1
            return SingularFunction.from_polynomial(self.space, self._coordinate(tok))
        if tok.kind == "q":
            self.index += 1
            if self.space.dim == 1:
                raise LiteralSyntaxError("q(...) is only used when d > 1", tok.position)
            self.expect("(")
            combo = self._linear_points()
            self.expect(")")
            return SingularFunction.from_polynomial(self.space, self._quadratic(combo))
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        found = tok.text or "end of input"
        raise LiteralSyntaxError(f"unexpected {found!r}", tok.position)

    def _coordinate(self, tok: _Token):
        coord = tok.coord
        if coord is None:
            if self.space.dim != 1:
                raise LiteralSyntaxError("coordinates need an index such as x1_0 when d > 1", tok.position)
            coord = 0
        try:
            return self.space.coord(tok.point, coord)
        except IndexError as exc:
            raise LiteralSyntaxError(str(exc), tok.position) from exc

    def _linear_points(self) -> dict[int, int]:
        combo: dict[int, int] = {}
        sign = -1 if self.accept("-") else 1
        while True:
            scale = 1
            if self.current.kind == "num":
                scale = self.number()
                self.expect("*")
            tok = self.current
            if tok.kind != "var" or tok.coord is not None:
                raise LiteralSyntaxError("q(...) takes a signed sum of points such as x1-x2", tok.position)
            if tok.point >= self.space.num_points:
                raise LiteralSyntaxError(f"point x{tok.point + 1} is out of range", tok.position)
            self.index += 1
            combo[tok.point] = combo.get(tok.point, 0) + sign * scale
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return combo

    def _quadratic(self, combo: dict[int, int]):
        total = self.space.ring.zero
        for u, s in enumerate(self.space.spacetime.metric_signs):
            v = sum((c * self.space.coord(p, u) for p, c in combo.items()), self.space.ring.zero)
            total += s * v**2
        return total


def _factors(space: FunctionSpace) -> list[Factor]:
    m = space.num_points
    out = [Factor.point(i) for i in range(m)]
    out += [Factor(FactorKind.PAIR, (i, j)) for i in range(m) for j in range(i + 1, m)]
    return [f for f in out if space.singularities.allows(f)]


def points_in(text: str) -> int:
    """Number of points a literal mentions (largest index)."""
    return max((t.point + 1 for t in _tokenize(text) if t.kind == "var"), default=0)


def parse_function(
    text: str,
    spacetime: SpacetimeSpec | None = None,
    singularities: SingularitySpec | None = None,
    num_points: int | None = None,
) -> SingularFunction:
    tokens = _tokenize(text)
    needed = max((t.point + 1 for t in tokens if t.kind == "var"), default=0)
    if num_points is None:
        num_points = max(needed, 1)
    elif needed > num_points:
        raise SpecMismatchError(f"literal mentions x{needed} but the space has {num_points} points")
    space = FunctionSpace(spacetime or SpacetimeSpec(), singularities or SingularitySpec(), num_points)
    return _Parser(tokens, space).parse()
