"""Exact singular functions: sums of polynomial numerators over products of
allowed factors.

A `SingularFunction` is stored as buckets `denominator -> numerator`, where
a denominator is a sorted tuple of `(Factor, exponent)` pairs with positive
exponents. Buckets keep sums of differently-singular terms apart so products
of propagators never have to be brought to a common denominator; a single
`numerator`/`denominator` pair is produced on demand by `combined()`.

Equality is exact: the bucket-wise difference is tried first, then the
combined difference is cross-multiplied and its numerator compared to zero
inside the common exactness window.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from fractions import Fraction
from typing import Any, Literal

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement

from src.singfun.errors import SpecMismatchError
from src.singfun.spaces import Factor, FactorKind, FunctionSpace

Denominator = tuple[tuple[Factor, int], ...]

_EMPTY: Denominator = ()


def to_qq(value: Any) -> Any:
    """Coerce int / Fraction / QQ element to a QQ element."""
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f"not an exact rational: {value!r}")


def _min_window(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _product_window(f: SingularFunction, g: SingularFunction) -> int | None:
    a = math.inf if f.window is None else f.window + g.low_degree()
    b = math.inf if g.window is None else g.window + f.low_degree()
    w = min(a, b)
    return None if w == math.inf else int(w)


def make_denominator(exponents: Mapping[Factor, int]) -> Denominator:
    for factor, e in exponents.items():
        if e < 0:
            raise ValueError(f"negative denominator exponent {e} on {factor}")
    return tuple(sorted((f, e) for f, e in exponents.items() if e))


def denominator_degree(space: FunctionSpace, denom: Denominator) -> int:
    return sum(e * (1 if space.dim == 1 else 2) for _, e in denom)


def _cancel_monomials(
    space: FunctionSpace, numer: PolyElement, denom: Denominator
) -> tuple[PolyElement, Denominator]:
    """Cancel d = 1 point factors x_i that divide every numerator monomial."""
    if space.dim != 1 or not numer:
        return numer, denom
    shifts: dict[int, int] = {}
    kept: dict[Factor, int] = {}
    for factor, e in denom:
        if factor.kind is FactorKind.POINT:
            i = factor.points[0]
            low = min(m[i] for m in numer.keys())
            k = min(low, e)
            if k:
                shifts[i] = k
            if e - k:
                kept[factor] = e - k
        else:
            kept[factor] = e
    if not shifts:
        return numer, denom
    ring = numer.ring
    shifted = {}
    for m, c in numer.items():
        mm = list(m)
        for i, k in shifts.items():
            mm[i] -= k
        shifted[tuple(mm)] = c
    return ring.from_dict(shifted), make_denominator(kept)


class SingularFunction:
    """An element of K_m with an exactness window (None means exact)."""

    __slots__ = ("space", "_buckets", "window")

    def __init__(
        self,
        space: FunctionSpace,
        buckets: Mapping[Denominator, PolyElement] | None = None,
        window: int | None = None,
    ) -> None:
        self.space = space
        self.window = window
        clean: dict[Denominator, PolyElement] = {}
        for denom, numer in (buckets or {}).items():
            for factor, _ in denom:
                space.check_factor(factor)
            if numer.ring is not space.ring:
                raise SpecMismatchError("numerator does not live in the space's ring")
            numer, denom = _cancel_monomials(space, numer, denom)
            if not numer:
                continue
            if denom in clean:
                total = clean[denom] + numer
                if total:
                    clean[denom] = total
                else:
                    del clean[denom]
            else:
                clean[denom] = numer
        self._buckets = clean

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls, space: FunctionSpace) -> SingularFunction:
        return cls(space)

    @classmethod
    def constant(cls, space: FunctionSpace, value: Any) -> SingularFunction:
        return cls(space, {_EMPTY: space.ring.ground_new(to_qq(value))})

    @classmethod
    def one(cls, space: FunctionSpace) -> SingularFunction:
        return cls.constant(space, 1)

    @classmethod
    def from_polynomial(cls, space: FunctionSpace, poly: PolyElement) -> SingularFunction:
        return cls(space, {_EMPTY: poly})

    @classmethod
    def from_factors(
        cls,
        space: FunctionSpace,
        numerator: PolyElement,
        exponents: Mapping[Factor, int],
        window: int | None = None,
    ) -> SingularFunction:
        return cls(space, {make_denominator(exponents): numerator}, window)

    # ----- inspection ---------------------------------------------------

    @property
    def buckets(self) -> Mapping[Denominator, PolyElement]:
        return dict(self._buckets)

    def snapshot(self) -> tuple:
        """A hashable copy of the buckets; equal snapshots mean identical representations."""
        frozen = ((d, tuple(sorted(n.items()))) for d, n in self._buckets.items())
        return (self.space, self.window, tuple(sorted(frozen)))

    @classmethod
    def from_snapshot(cls, snapshot: tuple) -> SingularFunction:
        space, window, buckets = snapshot
        return cls(space, {d: space.ring.from_dict(dict(terms)) for d, terms in buckets}, window)

    @property
    def num_points(self) -> int:
        return self.space.num_points

    @property
    def is_zero(self) -> bool:
        return not self._buckets

    @property
    def is_polynomial(self) -> bool:
        return all(not denom for denom in self._buckets)

    def low_degree(self) -> float:
        """Smallest homogeneous degree present (numerator degree minus denominator degree)."""
        return min(
            (
                min(sum(m) for m in numer.keys()) - denominator_degree(self.space, denom)
                for denom, numer in self._buckets.items()
            ),
            default=math.inf,
        )

    def factors(self) -> set[Factor]:
        return {f for denom in self._buckets for f, _ in denom}

    def combined(self) -> tuple[PolyElement, dict[Factor, int]]:
        """Single numerator over the least common denominator."""
        lcd: dict[Factor, int] = {}
        for denom in self._buckets:
            for f, e in denom:
                lcd[f] = max(lcd.get(f, 0), e)
        total = self.space.ring.zero
        for denom, numer in self._buckets.items():
            have = dict(denom)
            term = numer
            for f, e in lcd.items():
                missing = e - have.get(f, 0)
                if missing:
                    term = term * self.space.factor_poly(f) ** missing
            total += term
        return total, lcd

    @property
    def numerator(self) -> PolyElement:
        return self.combined()[0]

    @property
    def denominator(self) -> dict[Factor, int]:
        return self.combined()[1]

    def reduced(self) -> SingularFunction:
        """Single-bucket form with every divisible factor cancelled."""
        numer, lcd = self.combined()
        if not numer:
            return SingularFunction(self.space, window=self.window)
        for f in sorted(lcd):
            poly = self.space.factor_poly(f)
            while lcd[f]:
                quotient, remainder = numer.div(poly)
                if remainder:
                    break
                numer = quotient
                lcd[f] -= 1
        return SingularFunction.from_factors(self.space, numer, lcd, self.window)

    def polynomial(self) -> PolyElement:
        """The numerator of a denominator-free function."""
        if not self.is_polynomial:
            reduced = self.reduced()
            if not reduced.is_polynomial:
                raise ValueError("singular function has a non-trivial denominator")
            return reduced.polynomial()
        return self._buckets.get(_EMPTY, self.space.ring.zero)

    # ----- arithmetic ---------------------------------------------------

    def _coerce(self, other: Any) -> SingularFunction:
        if isinstance(other, SingularFunction):
            if other.space != self.space:
                raise SpecMismatchError(
                    f"cannot combine functions on {other.space} and {self.space}"
                )
            return other
        if isinstance(other, PolyElement):
            return SingularFunction.from_polynomial(self.space, other)
        return SingularFunction.constant(self.space, other)

    def __add__(self, other: Any) -> SingularFunction:
        other = self._coerce(other)
        buckets = dict(self._buckets)
        for denom, numer in other._buckets.items():
            buckets[denom] = buckets[denom] + numer if denom in buckets else numer
        return SingularFunction(self.space, buckets, _min_window(self.window, other.window))

    __radd__ = __add__

    def __neg__(self) -> SingularFunction:
        return SingularFunction(
            self.space, {d: -n for d, n in self._buckets.items()}, self.window
        )

    def __sub__(self, other: Any) -> SingularFunction:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> SingularFunction:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> SingularFunction:
        if not isinstance(other, SingularFunction | PolyElement):
            return self.scale(other)
        other = self._coerce(other)
        buckets: dict[Denominator, PolyElement] = {}
        for da, na in self._buckets.items():
            for db, nb in other._buckets.items():
                merged = dict(da)
                for f, e in db:
                    merged[f] = merged.get(f, 0) + e
                denom = make_denominator(merged)
                prod = na * nb
                buckets[denom] = buckets[denom] + prod if denom in buckets else prod
        return SingularFunction(self.space, buckets, _product_window(self, other))

    __rmul__ = __mul__

    def scale(self, value: Any) -> SingularFunction:
        c = to_qq(value)
        if not c:
            return SingularFunction(self.space, window=self.window)
        return SingularFunction(
            self.space, {d: n * c for d, n in self._buckets.items()}, self.window
        )

    def diff(self, point: int, coord: int = 0) -> SingularFunction:
        """Partial derivative in x_{point, coord} (quotient rule per factor)."""
        gen = self.space.coord(point, coord)
        buckets: dict[Denominator, PolyElement] = {}

        def put(denom: Denominator, numer: PolyElement) -> None:
            if numer:
                buckets[denom] = buckets[denom] + numer if denom in buckets else numer

        for denom, numer in self._buckets.items():
            put(denom, numer.diff(gen))
            for f, e in denom:
                dpoly = self.space.factor_poly(f).diff(gen)
                if not dpoly:
                    continue
                raised = dict(denom)
                raised[f] = e + 1
                put(make_denominator(raised), numer * dpoly * (-e))
        window = None if self.window is None else self.window - 1
        return SingularFunction(self.space, buckets, window)

    def truncated(self, window: int | None) -> SingularFunction:
        """The same function, trusted only below `window`."""
        return SingularFunction(self.space, self._buckets, _min_window(self.window, window))

    def diff_multi(self, point: int, alpha: Iterable[int]) -> SingularFunction:
        out = self
        for coord, k in enumerate(alpha):
            for _ in range(k):
                out = out.diff(point, coord)
        return out

    # ----- change of space ----------------------------------------------

    def lift(self, num_points: int) -> SingularFunction:
        """The same function viewed in a space with more points."""
        target = self.space.with_points(num_points)
        if target == self.space:
            return self
        return SingularFunction(
            target,
            {d: self.space.lift(n, target) for d, n in self._buckets.items()},
            self.window,
        )

    def transport(
        self, target: FunctionSpace, images: Mapping[int, tuple[int, int | None]]
    ) -> SingularFunction:
        """Substitute each source point p by x_i (image (i, None)) or x_i - x_j.

        Pair factors of the source require plain point images.
        """
        if not self.space.same_family(target):
            raise SpecMismatchError("transport needs the same spacetime and singularities")
        dim = self.space.dim
        ring = target.ring
        coord_images: list[PolyElement] = []
        for p in range(self.space.ring.ngens // dim):
            i, j = images.get(p, (p, None)) if p < self.space.num_points else (0, None)
            for u in range(dim):
                if p >= self.space.num_points:
                    coord_images.append(ring.zero)
                    continue
                v = target.coord(i, u)
                if j is not None:
                    v = v - target.coord(j, u)
                coord_images.append(v)

        def subst(poly: PolyElement) -> PolyElement:
            out = ring.zero
            for monom, c in poly.items():
                term = ring.ground_new(c)
                for k, e in enumerate(monom):
                    if e:
                        term = term * coord_images[k] ** e
                out += term
            return out

        buckets: dict[Denominator, PolyElement] = {}
        for denom, numer in self._buckets.items():
            new_numer = subst(numer)
            exps: dict[Factor, int] = {}
            sign = 1
            for f, e in denom:
                if f.kind is FactorKind.POINT:
                    i, j = images.get(f.points[0], (f.points[0], None))
                    if j is None:
                        g, s = Factor.point(i), 1
                    else:
                        g, s = Factor.pair(i, j)
                else:
                    a, b = (images.get(p, (p, None)) for p in f.points)
                    if a[1] is not None or b[1] is not None:
                        raise ValueError("pair factors can only be moved to plain points")
                    g, s = Factor.pair(a[0], b[0])
                exps[g] = exps.get(g, 0) + e
                if dim == 1 and s < 0 and e % 2:
                    sign = -sign
            denom_new = make_denominator(exps)
            term = new_numer if sign > 0 else -new_numer
            buckets[denom_new] = buckets[denom_new] + term if denom_new in buckets else term
        return SingularFunction(target, buckets, self.window)

    def reflect(self) -> SingularFunction:
        """f(-x): every coordinate negated."""
        ring = self.space.ring
        buckets: dict[Denominator, PolyElement] = {}
        for denom, numer in self._buckets.items():
            flipped = ring.from_dict(
                {m: (c if sum(m) % 2 == 0 else -c) for m, c in numer.items()}
            )
            if self.space.dim == 1:
                # every d = 1 factor is linear, so it flips sign
                if sum(e for _, e in denom) % 2:
                    flipped = -flipped
            buckets[denom] = flipped
        return SingularFunction(self.space, buckets, self.window)

    # ----- comparison ---------------------------------------------------

    def difference_numerator(self, other: SingularFunction) -> tuple[PolyElement, int]:
        """Combined numerator of self - other and the combined denominator degree."""
        numer, lcd = (self - other).combined()
        return numer, denominator_degree(self.space, make_denominator(lcd))

    def equals(self, other: SingularFunction) -> bool:
        other = self._coerce(other)
        diff = self - other
        if diff.is_zero:
            return True
        numer, lcd = diff.combined()
        if not numer:
            return True
        window = diff.window
        if window is None:
            return False
        bound = window + denominator_degree(self.space, make_denominator(lcd))
        return all(sum(m) >= bound for m in numer.keys())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SingularFunction | PolyElement | int | Fraction):
            try:
                return self.equals(other)  # type: ignore[arg-type]
            except SpecMismatchError:
                return False
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        from src.singfun.render import render_function

        return f"SingularFunction({render_function(self)!r})"

    def __str__(self) -> str:
        from src.singfun.render import render_function

        return render_function(self)


SFOp = Literal["add", "mul", "negate"]


def sf_arith(op: SFOp, f: SingularFunction, g: SingularFunction | None = None) -> SingularFunction:
    """Ring arithmetic dispatch; `negate` ignores `g`."""
    if op == "negate":
        return -f
    if g is None:
        raise ValueError(f"{op} needs two operands")
    if f.space != g.space:
        raise SpecMismatchError(f"cannot {op} functions on {f.space} and {g.space}")
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def sf_diff(f: SingularFunction, point: int, coord: int = 0) -> SingularFunction:
    return f.diff(point, coord)
