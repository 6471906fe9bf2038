"""Iterated Laurent expansion of state series (d = 1).

`expand_state` takes a StateSeries of m points to a LaurentState over the
variables of a RegionOrder. Each original point p is placed at a linear
form of region variables. Its translated generators T_p^alpha are either
rebased onto a region variable b (T_(b+w)^alpha = sum_k w^k/k! T_b^(alpha+k))
or materialized into plain generators (sum_k D^(alpha+k) phi form^k/k!).
Keys of a LaurentState therefore carry region-variable indices as points.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from sympy.polys.domains import QQ

from src.fieldring.monomials import (
    FieldElement,
    FieldMonomial,
    Generator,
    monomial_order,
    render_linear,
)
from src.fieldring.states import StateSeries
from src.singfun.errors import UnsupportedExpansionError, WindowError
from src.singfun.laurent import Exponent, LaurentSeries, RegionOrder, expand, linear_form_series


@dataclass(frozen=True)
class Placement:
    """Where an original point goes: x_p = form; T_p rebased onto `base` or materialized."""

    form: Mapping[int, int]
    base: int | None = None

    def __post_init__(self) -> None:
        form = {int(v): int(c) for v, c in self.form.items() if c}
        if not form:
            raise ValueError("a point cannot be placed at 0")
        if self.base is not None and form.get(self.base) != 1:
            raise ValueError(f"rebasing onto x{self.base + 1} needs coefficient 1 there, got {form}")
        object.__setattr__(self, "form", form)

    @classmethod
    def at(cls, var: int) -> Placement:
        """The point is the region variable itself, with T kept symbolic there."""
        return cls({var: 1}, var)

    @classmethod
    def materialized(cls, form: Mapping[int, int]) -> Placement:
        return cls(form, None)

    def offset(self) -> dict[int, int]:
        return {v: c for v, c in self.form.items() if v != self.base}


class LaurentState:
    """Field monomials with LaurentSeries coefficients sharing weights and a window."""

    __slots__ = ("weights", "names", "terms", "window")

    def __init__(
        self,
        weights: Sequence[int],
        terms: Mapping[FieldMonomial, LaurentSeries] | None = None,
        window: int | None = None,
        names: Sequence[str] | None = None,
    ) -> None:
        self.weights = tuple(weights)
        self.names = tuple(names) if names else tuple(f"x{i + 1}" for i in range(len(self.weights)))
        self.window = window
        clean: dict[FieldMonomial, LaurentSeries] = {}
        for mono, series in (terms or {}).items():
            if series.weights != self.weights:
                raise ValueError("coefficient series use different weights")
            series = series.truncated(window)
            if series.names != self.names:
                series = LaurentSeries(self.weights, series.terms, series.window, self.names)
            if mono in clean:
                series = clean[mono] + series
            if series.terms:
                clean[mono] = series
            else:
                clean.pop(mono, None)
        self.terms = clean

    def _like(self, terms: Mapping[FieldMonomial, LaurentSeries], window: int | None) -> LaurentState:
        return LaurentState(self.weights, terms, window, self.names)

    @property
    def num_vars(self) -> int:
        return len(self.weights)

    def zero_series(self) -> LaurentSeries:
        return LaurentSeries(self.weights, {}, self.window, self.names)

    def coefficient(self, mono: FieldMonomial) -> LaurentSeries:
        return self.terms.get(mono, self.zero_series())

    # ----- arithmetic ---------------------------------------------------

    def __add__(self, other: LaurentState) -> LaurentState:
        if other.weights != self.weights:
            raise ValueError("states use different weights")
        window = _min(self.window, other.window)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return self._like(terms, window)

    def __neg__(self) -> LaurentState:
        return self._like({m: -c for m, c in self.terms.items()}, self.window)

    def __sub__(self, other: LaurentState) -> LaurentState:
        return self + (-other)

    def scale(self, value: Any) -> LaurentState:
        return self._like({m: c.scale(value) for m, c in self.terms.items()}, self.window)

    def shift(self, exps: Exponent) -> LaurentState:
        dw = sum(w * e for w, e in zip(self.weights, exps, strict=True))
        window = None if self.window is None else self.window + dw
        return self._like({m: c.shift(exps) for m, c in self.terms.items()}, window)

    def residue(self, var: int) -> LaurentState:
        w = self.weights[var]
        if self.window is not None and -w >= self.window:
            raise WindowError(f"window {self.window} cannot certify the x{var + 1}^-1 coefficient")
        weights = self.weights[:var] + self.weights[var + 1 :]
        names = self.names[:var] + self.names[var + 1 :]
        window = None if self.window is None else self.window + w
        terms = {m: c.residue(var) for m, c in self.terms.items()}
        return LaurentState(weights, terms, window, names)

    def apply_D(self) -> LaurentState:
        """D on plain generators, leaving the series coefficients alone."""
        terms: dict[FieldMonomial, LaurentSeries] = {}
        for mono, series in self.terms.items():
            for g, k in mono.counts().items():
                if not g.is_plain:
                    raise ValueError("D acts on materialized states only")
                target = mono.without(g) * FieldMonomial.of(g.raised(0))
                value = series.scale(k)
                terms[target] = terms[target] + value if target in terms else value
        return self._like(terms, self.window)

    def translated(self, var: int) -> LaurentState:
        """e^(x_var D): sum_n x_var^n D^n / n!, kept inside the window."""
        w = self.weights[var]
        if w <= 0 or self.window is None:
            raise WindowError("translation needs a finite window and a variable of positive weight")
        total = self
        power = self
        n = 1
        low = min((int(c.min_weight()) for c in self.terms.values()), default=0)
        while low + n * w < self.window:
            power = power.apply_D()
            exps = tuple(1 if k == var else 0 for k in range(self.num_vars))
            step = power.scale(QQ(1, math.factorial(n)))
            for _ in range(n):
                step = step.shift(exps)
            total = total + step
            n += 1
        return total

    # ----- reading off --------------------------------------------------

    def by_exponent(self, var: int = 0) -> dict[int, FieldElement]:
        """Group a one-variable state by the exponent of x_var: {k: u_k}."""
        if self.num_vars != 1:
            raise ValueError("by_exponent needs a state in one variable")
        grouped: dict[int, dict[FieldMonomial, Any]] = {}
        for mono, series in self.terms.items():
            for exps, c in series.terms.items():
                bucket = grouped.setdefault(exps[var], {})
                bucket[mono] = bucket[mono] + c if mono in bucket else c
        dim = _dim_of(self)
        return {k: FieldElement(terms, dim) for k, terms in sorted(grouped.items())}

    def to_element(self, dim: int = 1) -> FieldElement:
        if self.num_vars:
            raise ValueError("to_element needs a state in zero variables")
        return FieldElement({m: c.value() for m, c in self.terms.items()}, dim)

    def first_difference(self, other: LaurentState) -> tuple[FieldMonomial, Exponent] | None:
        if other.weights != self.weights:
            raise ValueError("states use different weights")
        window = _min(self.window, other.window)
        worst: tuple[FieldMonomial, Exponent] | None = None
        for mono in set(self.terms) | set(other.terms):
            a = self.coefficient(mono).truncated(window)
            b = other.coefficient(mono).truncated(window)
            bad = a.first_difference(b)
            if bad is None:
                continue
            key = (a.weight(bad), monomial_order(mono), bad)
            if worst is None or key < (a.weight(worst[1]), monomial_order(worst[0]), worst[1]):
                worst = (mono, bad)
        return worst

    def equal_within(self, other: LaurentState) -> bool:
        return self.first_difference(other) is None

    def render(self) -> str:
        rows = []
        for mono, series in sorted(self.terms.items(), key=lambda mc: monomial_order(mc[0]), reverse=True):
            text = str(series)
            if mono.is_unit:
                body = text
            elif text == "1":
                body = mono.render()
            elif " + " in text or " - " in text or text.startswith("-"):
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
        return f"LaurentState({self.render()!r}, window={self.window})"


def _min(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _dim_of(state: LaurentState) -> int:
    for mono in state.terms:
        for g in mono.factors:
            return g.dim
    return 1


def _generator_series(
    g: Generator,
    placement: Placement,
    weights: Sequence[int],
    names: Sequence[str],
    budget: int,
) -> dict[Generator, LaurentSeries]:
    """The expansion of a translated generator T_p^alpha, kept below `budget`."""
    offset = placement.offset() if placement.base is not None else placement.form
    target_point = placement.base
    if not offset:
        return {g.at(target_point): LaurentSeries.constant(weights, 1, names)}
    step = min(weights[v] for v in offset)
    if step <= 0:
        raise WindowError("translated generators can only be expanded in variables of positive weight")
    form = linear_form_series(weights, offset, names)
    out: dict[Generator, LaurentSeries] = {}
    power = LaurentSeries.constant(weights, 1, names)
    k = 0
    while k * step < budget:
        out[g.raised(0, k).at(target_point)] = power.scale(QQ(1, math.factorial(k))).truncated(budget)
        power = (power * form).truncated(budget)
        k += 1
    return out


def expand_state(
    s: StateSeries,
    region: RegionOrder,
    window: int,
    placement: Sequence[Placement] | None = None,
    names: Sequence[str] | None = None,
) -> LaurentState:
    """Expand every coefficient of `s` in `region`, exact below `window`."""
    if s.space.dim != 1:
        raise UnsupportedExpansionError(
            f"region expansion is only defined in dimension 1, got d={s.space.dim}"
        )
    m = s.num_points
    if placement is None:
        placement = [Placement.at(p) for p in range(m)]
    if len(placement) != m:
        raise ValueError(f"one placement per point is required ({m} points)")
    weights = region.weight_vector
    names = tuple(names) if names else tuple(f"x{i + 1}" for i in range(region.num_vars))
    substitution = [p.form for p in placement]
    result = LaurentState(weights, {}, window, names)
    for mono, coeff in s.terms.items():
        if coeff.is_zero:
            continue
        cf = expand(coeff, region, window, substitution=substitution)
        if not cf.terms:
            continue
        low = int(cf.min_weight())
        budget = window - low
        plain, moving = mono.split(lambda g: g.point is None)
        partial: dict[FieldMonomial, LaurentSeries] = {plain: cf}
        for g in moving.factors:
            series_map = _generator_series(g, placement[g.point], weights, names, budget)  # type: ignore[index]
            nxt: dict[FieldMonomial, LaurentSeries] = {}
            for base, series in partial.items():
                for gen, factor in series_map.items():
                    key = base * FieldMonomial.of(gen)
                    value = (series * factor).truncated(window)
                    nxt[key] = nxt[key] + value if key in nxt else value
            partial = nxt
        result = result + LaurentState(weights, partial, window, names)
    return result


def state_from_elements(
    pieces: Mapping[Exponent, FieldElement],
    weights: Sequence[int],
    window: int | None,
    names: Sequence[str] | None = None,
) -> LaurentState:
    """sum x^exps * u for {exps: u}; the inverse of `by_exponent`."""
    terms: dict[FieldMonomial, LaurentSeries] = {}
    for exps, u in pieces.items():
        for mono, c in u.terms.items():
            series = LaurentSeries(weights, {tuple(exps): c}, None, names)
            terms[mono] = terms[mono] + series if mono in terms else series
    return LaurentState(weights, terms, window, names)


__all__ = [
    "LaurentState",
    "Placement",
    "expand_state",
    "state_from_elements",
]
