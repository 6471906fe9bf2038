"""StateSeries: elements of V (x) K_m, field monomials with singular-function coefficients.

Keys may hold translated generators T_i^alpha (see `monomials.Generator`),
so products of fields at different points stay exact rational forms.
`materialize` trades them for truncated Taylor sums in the x_i.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Iterator, Mapping
from typing import Any

from sympy.polys.domains import QQ

from src.fieldring.monomials import (
    UNIT,
    FieldElement,
    FieldMonomial,
    Generator,
    factorial_of,
    monomial_order,
    multi_indices_below,
    render_linear,
)
from src.singfun.errors import SpecMismatchError
from src.singfun.functions import SingularFunction, to_qq
from src.singfun.render import render_function
from src.singfun.spaces import FunctionSpace


class StateSeries:
    __slots__ = ("space", "terms")

    def __init__(
        self,
        space: FunctionSpace,
        terms: Mapping[FieldMonomial, SingularFunction] | None = None,
    ) -> None:
        self.space = space
        clean: dict[FieldMonomial, SingularFunction] = {}
        for mono, coeff in (terms or {}).items():
            if coeff.space != space:
                raise SpecMismatchError(f"coefficient lives on {coeff.space}, expected {space}")
            for g in mono.factors:
                if g.dim != space.dim:
                    raise SpecMismatchError(f"{g.render()} does not have dimension {space.dim}")
                if g.point is not None and g.point >= space.num_points:
                    raise SpecMismatchError(f"{g.render()} refers to a point outside the space")
            if mono in clean:
                coeff = clean[mono] + coeff
            if coeff.is_zero and coeff.window is None:
                clean.pop(mono, None)
            else:
                clean[mono] = coeff
        self.terms = clean

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls, space: FunctionSpace) -> StateSeries:
        return cls(space)

    @classmethod
    def vacuum(cls, space: FunctionSpace) -> StateSeries:
        return cls(space, {UNIT: SingularFunction.one(space)})

    @classmethod
    def from_element(cls, v: FieldElement, space: FunctionSpace) -> StateSeries:
        if v.terms and v.dim != space.dim:
            raise SpecMismatchError(f"element of dimension {v.dim} in a space of dimension {space.dim}")
        return cls(space, {m: SingularFunction.constant(space, c) for m, c in v.terms.items()})

    @classmethod
    def monomial(cls, space: FunctionSpace, mono: FieldMonomial, coeff: Any = 1) -> StateSeries:
        if not isinstance(coeff, SingularFunction):
            coeff = SingularFunction.constant(space, coeff)
        return cls(space, {mono: coeff})

    # ----- inspection ---------------------------------------------------

    @property
    def num_points(self) -> int:
        return self.space.num_points

    @property
    def window(self) -> int | None:
        windows = [c.window for c in self.terms.values() if c.window is not None]
        return min(windows) if windows else None

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.terms.values())

    def coefficient(self, mono: FieldMonomial) -> SingularFunction:
        return self.terms.get(mono, SingularFunction.zero(self.space))

    def items(self) -> Iterator[tuple[FieldMonomial, SingularFunction]]:
        return iter(self.terms.items())

    def is_symbolic_free(self, points: Iterable[int] | None = None) -> bool:
        """True when no key holds a translated generator (at `points`, if given)."""
        wanted = None if points is None else set(points)
        return not any(
            g.point is not None and (wanted is None or g.point in wanted)
            for mono in self.terms
            for g in mono.factors
        )

    def vev(self) -> SingularFunction:
        """Constant-term functional applied coefficient-wise."""
        return self.coefficient(UNIT)

    def coefficient_element(self, exps: tuple[int, ...]) -> FieldElement:
        """The FieldElement multiplying the coordinate monomial `exps` (polynomial coefficients only)."""
        terms = {}
        for mono, coeff in self.terms.items():
            if not mono.is_plain:
                raise ValueError("coefficient_element needs a materialized series")
            c = coeff.polynomial().get(tuple(exps))
            if c:
                terms[mono] = c
        return FieldElement(terms, self.space.dim)

    # ----- arithmetic ---------------------------------------------------

    def _coerce(self, other: StateSeries) -> StateSeries:
        if other.space != self.space:
            raise SpecMismatchError(f"cannot combine states on {other.space} and {self.space}")
        return other

    def __add__(self, other: StateSeries) -> StateSeries:
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return StateSeries(self.space, terms)

    def __neg__(self) -> StateSeries:
        return StateSeries(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: StateSeries) -> StateSeries:
        return self + (-self._coerce(other))

    def scale(self, value: Any) -> StateSeries:
        c = to_qq(value)
        return StateSeries(self.space, {m: v.scale(c) for m, v in self.terms.items()})

    def times_function(self, f: SingularFunction) -> StateSeries:
        return StateSeries(self.space, {m: c * f for m, c in self.terms.items()})

    def times_monomial(self, mono: FieldMonomial) -> StateSeries:
        return StateSeries(self.space, {m * mono: c for m, c in self.terms.items()})

    def __mul__(self, other: StateSeries) -> StateSeries:
        other = self._coerce(other)
        terms: dict[FieldMonomial, SingularFunction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = ma * mb
                terms[m] = terms[m] + ca * cb if m in terms else ca * cb
        return StateSeries(self.space, terms)

    def lift(self, num_points: int) -> StateSeries:
        if num_points == self.num_points:
            return self
        if num_points < self.num_points:
            raise SpecMismatchError("cannot lift into a space with fewer points")
        target = self.space.with_points(num_points)
        return StateSeries(target, {m: c.lift(num_points) for m, c in self.terms.items()})

    # ----- derivations --------------------------------------------------

    def apply_derivation(self, image: Callable[[Generator], StateSeries]) -> StateSeries:
        """Leibniz extension of `image`, defined on single generators."""
        total = StateSeries.zero(self.space)
        for mono, coeff in self.terms.items():
            for g, k in mono.counts().items():
                img = image(g)
                if img.is_zero and img.window is None:
                    continue
                rest = StateSeries(self.space, {mono.without(g): coeff.scale(k)})
                total = total + rest * img
        return total

    def apply_D(self, coord: int) -> StateSeries:
        """D_coord on the field part: plain and translated generators both raise alpha."""
        if not 0 <= coord < self.space.dim:
            raise IndexError(f"coordinate {coord} out of range for dimension {self.space.dim}")
        return self.apply_derivation(
            lambda g: StateSeries.monomial(self.space, FieldMonomial.of(g.raised(coord)))
        )

    def diff_point(self, point: int, coord: int = 0) -> StateSeries:
        """d/dx_(point, coord): coefficients differentiate, T_point^alpha raises alpha."""
        out = StateSeries(self.space, {m: c.diff(point, coord) for m, c in self.terms.items()})

        def image(g: Generator) -> StateSeries:
            if g.point != point:
                return StateSeries.zero(self.space)
            return StateSeries.monomial(self.space, FieldMonomial.of(g.raised(coord)))

        return out + self.apply_derivation(image)

    def diff_point_multi(self, point: int, alpha: Iterable[int]) -> StateSeries:
        out = self
        for coord, k in enumerate(alpha):
            for _ in range(k):
                out = out.diff_point(point, coord)
        return out

    # ----- materialization ----------------------------------------------

    def materialize(self, cutoff: int, points: Iterable[int] | None = None) -> StateSeries:
        """Replace T_i^alpha by sum_beta D^(alpha+beta) phi x_i^beta / beta!.

        Taylor parts are kept while their total degree (over all materialized
        points) stays below `cutoff`; the coefficient window records it.
        """
        if cutoff < 0:
            raise ValueError(f"cutoff must be >= 0, got {cutoff}")
        wanted = None if points is None else set(points)
        space = self.space
        ring = space.ring
        dim = space.dim
        terms: dict[FieldMonomial, SingularFunction] = {}
        for mono, coeff in self.terms.items():
            moving, kept = mono.split(
                lambda g: g.point is not None and (wanted is None or g.point in wanted)
            )
            if moving.is_unit:
                terms[mono] = terms[mono] + coeff if mono in terms else coeff
                continue
            # (plain monomial, taylor degree) -> polynomial in the materialized coordinates
            partial: dict[tuple[FieldMonomial, int], Any] = {(kept, 0): ring.one}
            for g in moving.factors:
                nxt: dict[tuple[FieldMonomial, int], Any] = {}
                for (base, deg), poly in partial.items():
                    for beta in multi_indices_below(dim, cutoff - deg):
                        x_part = ring.one
                        for u, b in enumerate(beta):
                            if b:
                                x_part = x_part * space.coord(g.point, u) ** b  # type: ignore[arg-type]
                        x_part = x_part * QQ(1, factorial_of(beta))
                        key = (base * FieldMonomial.of(g.shifted(beta).at(None)), deg + sum(beta))
                        value = poly * x_part
                        nxt[key] = nxt[key] + value if key in nxt else value
                partial = nxt
            low = coeff.low_degree()
            window = None if low == math.inf else cutoff + int(low)
            grouped: dict[FieldMonomial, Any] = {}
            for (base, _), poly in partial.items():
                grouped[base] = grouped[base] + poly if base in grouped else poly
            for base, poly in grouped.items():
                value = (coeff * SingularFunction.from_polynomial(space, poly)).truncated(window)
                terms[base] = terms[base] + value if base in terms else value
        return StateSeries(space, terms)

    # ----- comparison ---------------------------------------------------

    def first_difference(self, other: StateSeries) -> FieldMonomial | None:
        """Lowest-ordered monomial whose coefficients differ, or None."""
        other = self._coerce(other)
        bad = []
        for mono in set(self.terms) | set(other.terms):
            if not self.coefficient(mono).equals(other.coefficient(mono)):
                bad.append(mono)
        if not bad:
            return None
        return min(bad, key=monomial_order)

    def equals(self, other: StateSeries) -> bool:
        return self.first_difference(other) is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateSeries):
            return NotImplemented
        try:
            return self.equals(other)
        except SpecMismatchError:
            return False

    __hash__ = None  # type: ignore[assignment]

    def render(self) -> str:
        rows = []
        ordered = sorted(self.terms.items(), key=lambda mc: monomial_order(mc[0]), reverse=True)
        for mono, coeff in ordered:
            if coeff.is_zero:
                continue
            text = render_function(coeff)
            if mono.is_unit:
                body = text
            elif text == "1":
                body = mono.render()
            elif text == "-1":
                body = f"-{mono.render()}"
            elif " + " in text or " - " in text or text.startswith("("):
                body = f"({text})*{mono.render()}"
            else:
                body = f"{text}*{mono.render()}"
            if body.startswith("-"):
                rows.append((mono, body[1:], True))
            else:
                rows.append((mono, body, False))
        return render_linear(rows)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"StateSeries({self.render()!r}, points={self.num_points})"
