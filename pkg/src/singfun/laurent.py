"""Iterated Laurent expansions of d = 1 singular functions, and residues.

Regions are read outer to inner (`|x_a| >> |x_b| >> ...`). Each variable
carries a non-negative integer weight that grows strictly towards the inner
variables; a series is exact on every term whose weighted degree is below
its window. With the default weights (outermost 0, then 1, 2, ...) the
window of `expand` bounds the degree in the inner variables, which is how
`expand(1/(x-y), |x|>>|y|, 4)` yields exactly four geometric terms.

Window bookkeeping is pessimistic:

    window(f + g) = min(W_f, W_g)
    window(f * g) = min(W_f + minweight(g), W_g + minweight(f))
    window(res_v f) = W_f + weight(v)
    window(d/dv f) = W_f - weight(v)
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from sympy.polys.domains import QQ

from src.singfun.errors import UnsupportedExpansionError, WindowError
from src.singfun.functions import SingularFunction, to_qq
from src.singfun.spaces import FactorKind

Exponent = tuple[int, ...]
LinearForm = Mapping[int, int]


@dataclass(frozen=True)
class RegionOrder:
    """Ordering of variables from the largest to the smallest modulus."""

    ordering: tuple[int, ...]
    weights: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        ordering = tuple(int(i) for i in self.ordering)
        if sorted(ordering) != list(range(len(ordering))):
            raise ValueError(f"region ordering must be a permutation, got {ordering}")
        object.__setattr__(self, "ordering", ordering)
        weights = self.weights
        if weights is None:
            weights = tuple(range(len(ordering)))
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(ordering):
            raise ValueError("one weight per region variable is required")
        if any(w < 0 for w in weights):
            raise ValueError(f"weights must be non-negative, got {weights}")
        if any(b <= a for a, b in zip(weights, weights[1:], strict=False)):
            raise ValueError(f"weights must increase strictly inwards, got {weights}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def graded(cls, ordering: Sequence[int]) -> RegionOrder:
        """Weights 1, 2, ...: every variable (even the outermost) may be expanded."""
        return cls(tuple(ordering), tuple(range(1, len(ordering) + 1)))

    @property
    def num_vars(self) -> int:
        return len(self.ordering)

    @property
    def weight_vector(self) -> tuple[int, ...]:
        """Weights indexed by variable rather than by position."""
        vec = [0] * self.num_vars
        for pos, var in enumerate(self.ordering):
            vec[var] = self.weights[pos]  # type: ignore[index]
        return tuple(vec)

    def describe(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.num_vars)]
        return " >> ".join(f"|{names[v]}|" for v in self.ordering)


def _min_window(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LaurentSeries:
    """Finitely many exact terms plus a weighted truncation window."""

    __slots__ = ("weights", "terms", "window", "names")

    def __init__(
        self,
        weights: Sequence[int],
        terms: Mapping[Exponent, Any] | None = None,
        window: int | None = None,
        names: Sequence[str] | None = None,
    ) -> None:
        self.weights = tuple(weights)
        self.window = window
        self.names = tuple(names) if names else tuple(f"x{i + 1}" for i in range(len(self.weights)))
        clean: dict[Exponent, Any] = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(self.weights):
                raise ValueError(f"exponent {exps} does not match {len(self.weights)} variables")
            if not c:
                continue
            if window is not None and self._weight(exps) >= window:
                continue
            clean[tuple(exps)] = c
        self.terms = clean

    # ----- construction -------------------------------------------------

    def _like(self, terms: Mapping[Exponent, Any], window: int | None) -> LaurentSeries:
        return LaurentSeries(self.weights, terms, window, self.names)

    @classmethod
    def monomial(
        cls,
        weights: Sequence[int],
        exps: Exponent,
        coeff: Any = 1,
        names: Sequence[str] | None = None,
    ) -> LaurentSeries:
        return cls(weights, {tuple(exps): to_qq(coeff)}, None, names)

    @classmethod
    def constant(cls, weights: Sequence[int], value: Any, names: Sequence[str] | None = None) -> LaurentSeries:
        return cls.monomial(weights, (0,) * len(weights), value, names)

    def zero_like(self) -> LaurentSeries:
        return self._like({}, None)

    # ----- inspection ---------------------------------------------------

    @property
    def num_vars(self) -> int:
        return len(self.weights)

    def _weight(self, exps: Exponent) -> int:
        return sum(w * e for w, e in zip(self.weights, exps, strict=True))

    def weight(self, exps: Exponent) -> int:
        return self._weight(exps)

    def min_weight(self) -> float:
        """Smallest weight any (known or truncated) term can have."""
        low = min((self._weight(e) for e in self.terms), default=math.inf)
        if self.window is not None:
            low = min(low, self.window)
        return low

    def lower_bounds(self) -> tuple[int, ...]:
        """Per-variable minimal exponent among the known terms."""
        if not self.terms:
            return (0,) * self.num_vars
        return tuple(min(e[k] for e in self.terms) for k in range(self.num_vars))

    def coefficient(self, exps: Exponent) -> Any:
        exps = tuple(exps)
        if self.window is not None and self._weight(exps) >= self.window:
            raise WindowError(f"coefficient {exps} is outside window {self.window}")
        return self.terms.get(exps, QQ(0))

    @property
    def is_exact(self) -> bool:
        return self.window is None

    def value(self) -> Any:
        """The constant of a series in zero variables."""
        if self.num_vars:
            raise ValueError("value() is only defined for series in zero variables")
        return self.terms.get((), QQ(0))

    # ----- arithmetic ---------------------------------------------------

    def _check(self, other: LaurentSeries) -> None:
        if other.weights != self.weights:
            raise ValueError(f"series use different weights: {self.weights} vs {other.weights}")

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return self._like(terms, _min_window(self.window, other.window))

    def __neg__(self) -> LaurentSeries:
        return self._like({e: -c for e, c in self.terms.items()}, self.window)

    def __sub__(self, other: LaurentSeries) -> LaurentSeries:
        return self + (-other)

    def scale(self, value: Any) -> LaurentSeries:
        c = to_qq(value)
        return self._like({e: v * c for e, v in self.terms.items()}, self.window)

    def product_window(self, other: LaurentSeries) -> int | None:
        a = math.inf if self.window is None else self.window + other.min_weight()
        b = math.inf if other.window is None else other.window + self.min_weight()
        w = min(a, b)
        return None if w == math.inf else int(w)

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        self._check(other)
        window = self.product_window(other)
        terms: dict[Exponent, Any] = {}
        for ea, ca in self.terms.items():
            wa = self._weight(ea)
            for eb, cb in other.terms.items():
                if window is not None and wa + self._weight(eb) >= window:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb, strict=True))
                terms[e] = terms[e] + ca * cb if e in terms else ca * cb
        return self._like(terms, window)

    def shift(self, exps: Exponent) -> LaurentSeries:
        """Multiply by the monomial x^exps."""
        dw = self._weight(exps)
        terms = {tuple(a + b for a, b in zip(e, exps, strict=True)): c for e, c in self.terms.items()}
        return self._like(terms, None if self.window is None else self.window + dw)

    def power(self, n: int, window: int | None = None) -> LaurentSeries:
        out = self.constant(self.weights, 1, self.names)
        for _ in range(n):
            out = (out * self).truncated(window)
        return out

    def truncated(self, window: int | None) -> LaurentSeries:
        if window is None:
            return self
        return self._like(self.terms, _min_window(self.window, window))

    def diff(self, var: int) -> LaurentSeries:
        terms: dict[Exponent, Any] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k == 0:
                continue
            lowered = list(e)
            lowered[var] -= 1
            terms[tuple(lowered)] = c * k
        window = None if self.window is None else self.window - self.weights[var]
        return self._like(terms, window)

    def residue(self, var: int) -> LaurentSeries:
        """Coefficient of x_var^-1, a series in the remaining variables."""
        w = self.weights[var]
        if self.window is not None and -w >= self.window:
            raise WindowError(
                f"window {self.window} cannot certify the x{var + 1}^-1 coefficient"
            )
        terms = {
            e[:var] + e[var + 1 :]: c for e, c in self.terms.items() if e[var] == -1
        }
        weights = self.weights[:var] + self.weights[var + 1 :]
        names = self.names[:var] + self.names[var + 1 :]
        window = None if self.window is None else self.window + w
        return LaurentSeries(weights, terms, window, names)

    # ----- comparison ---------------------------------------------------

    def first_difference(self, other: LaurentSeries) -> Exponent | None:
        """Lowest-weight exponent where the two series disagree inside both windows."""
        self._check(other)
        window = _min_window(self.window, other.window)
        keys = set(self.terms) | set(other.terms)
        bad = [
            e
            for e in keys
            if (window is None or self._weight(e) < window)
            and self.terms.get(e, 0) != other.terms.get(e, 0)
        ]
        if not bad:
            return None
        return min(bad, key=lambda e: (self._weight(e), e))

    def equal_within(self, other: LaurentSeries) -> bool:
        return self.first_difference(other) is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.weights == other.weights and self.equal_within(other)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        from src.singfun.render import render_laurent

        return render_laurent(self.names, self.terms)

    def __repr__(self) -> str:
        return f"LaurentSeries({self!s}, window={self.window})"


# ----- expansion -------------------------------------------------------------


def linear_form_series(
    weights: Sequence[int], form: LinearForm, names: Sequence[str] | None = None
) -> LaurentSeries:
    terms: dict[Exponent, Any] = {}
    for var, c in form.items():
        if c:
            e = [0] * len(weights)
            e[var] = 1
            terms[tuple(e)] = to_qq(c)
    return LaurentSeries(weights, terms, None, names)


def inverse_power(
    weights: Sequence[int],
    form: LinearForm,
    exponent: int,
    window: int | None,
    names: Sequence[str] | None = None,
) -> LaurentSeries:
    """Expand (sum c_v x_v)^-exponent around its outermost variable.

    With o the lowest-weight variable present, the form is written as
    c_o x_o (1 + u) with u of strictly positive weight, and the binomial
    series is kept up to `window`.
    """
    form = {v: c for v, c in form.items() if c}
    if not form:
        raise ZeroDivisionError("cannot invert the zero linear form")
    outer = min(form, key=lambda v: weights[v])
    c_o = to_qq(form[outer])
    lead_exp = [0] * len(weights)
    lead_exp[outer] = -exponent
    lead = LaurentSeries(weights, {tuple(lead_exp): c_o ** (-exponent)}, None, names)
    rest = {v: c for v, c in form.items() if v != outer}
    if not rest:
        return lead.truncated(window)
    u_terms: dict[Exponent, Any] = {}
    for v, c in rest.items():
        e = [0] * len(weights)
        e[v] = 1
        e[outer] = -1
        u_terms[tuple(e)] = to_qq(c) / c_o
    u = LaurentSeries(weights, u_terms, None, names)
    step = min(weights[v] - weights[outer] for v in rest)
    lead_weight = -exponent * weights[outer]
    if window is None:
        raise WindowError("expanding a pair factor needs a finite window")
    budget = window - lead_weight
    total = lead.zero_like()
    u_power = lead.constant(weights, 1, names)
    n = 0
    while n * step < budget:
        binom = (-1) ** n * math.comb(exponent + n - 1, n)
        total = total + u_power.scale(binom)
        u_power = (u_power * u).truncated(budget)
        n += 1
    series = (lead * LaurentSeries(weights, total.terms, budget, names)).truncated(window)
    return series


def expand(
    f: SingularFunction,
    region: RegionOrder,
    cutoff: int,
    *,
    substitution: Sequence[LinearForm] | None = None,
) -> LaurentSeries:
    """Iterated Laurent expansion of `f` in `region`, exact below window `cutoff`.

    `substitution[p]` expresses point p as a linear combination of region
    variables (defaults to the identity).
    """
    space = f.space
    if space.dim != 1:
        raise UnsupportedExpansionError(
            f"region expansion is only defined in dimension 1, got d={space.dim}"
        )
    if f.window is not None and cutoff > f.window:
        raise WindowError(f"cutoff {cutoff} exceeds the function's window {f.window}")
    m = space.num_points
    if substitution is None:
        if region.num_vars != m:
            raise ValueError(f"region has {region.num_vars} variables, function has {m} points")
        substitution = [{p: 1} for p in range(m)]
    elif len(substitution) != m:
        raise ValueError("one substitution image per point is required")
    weights = region.weight_vector
    names = tuple(f"x{i + 1}" for i in range(region.num_vars))
    images = [linear_form_series(weights, form, names) for form in substitution]

    total = LaurentSeries(weights, {}, None, names)
    for denom, numer in f.buckets.items():
        poly = LaurentSeries(weights, {}, None, names)
        for monom, c in numer.items():
            term = LaurentSeries.constant(weights, c, names)
            for p in range(m):
                if monom[p]:
                    term = term * images[p].power(monom[p])
            poly = poly + term
        forms: list[tuple[dict[int, int], int]] = []
        for factor, e in denom:
            if factor.kind is FactorKind.POINT:
                form = dict(substitution[factor.points[0]])
            else:
                i, j = factor.points
                form = dict(substitution[i])
                for v, c in substitution[j].items():
                    form[v] = form.get(v, 0) - c
            forms.append(({v: c for v, c in form.items() if c}, e))
        leads = []
        for form, e in forms:
            outer = min(form, key=lambda v: weights[v])
            leads.append(-e * weights[outer])
        base = poly.min_weight()
        if base == math.inf:
            continue
        floor = int(base) + sum(leads)
        bucket = poly
        for k, ((form, e), lead) in enumerate(zip(forms, leads, strict=True)):
            need = cutoff - (floor - lead)
            later = sum(leads[k + 1 :])
            factor = inverse_power(weights, form, e, need, names)
            bucket = (bucket * factor).truncated(cutoff - later)
        total = total + bucket.truncated(cutoff)
    return total.truncated(cutoff)


def residue(s: LaurentSeries, var: int) -> LaurentSeries:
    return s.residue(var)


def iter_exponents(s: LaurentSeries) -> Iterable[Exponent]:
    return sorted(s.terms, key=lambda e: (s.weight(e), e))
