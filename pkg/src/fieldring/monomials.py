"""The free commutative differential ring V = k[phi, D_u phi, D_u D_v phi, ...].

Generators are D^alpha phi for multi-indices alpha of length d. Inside
state series a generator may also be *translated* to a point i, standing for
d^alpha/dx_i^alpha of phi^+(x_i) = sum_beta D^(alpha+beta) phi x_i^beta/beta!
kept unexpanded; plain ring elements never contain translated generators.

Grading: deg(D^alpha phi) = |alpha| + 1, additive on monomials.
"""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Any

from sympy.polys.domains import QQ

from src.singfun.functions import to_qq
from src.singfun.render import format_rational


@dataclass(frozen=True)
class Generator:
    alpha: tuple[int, ...]
    point: int | None = None

    def __post_init__(self) -> None:
        if any(k < 0 for k in self.alpha):
            raise ValueError(f"multi-index must be non-negative, got {self.alpha}")

    @property
    def sort_key(self) -> tuple[int, int, tuple[int, ...]]:
        return (-1 if self.point is None else self.point, sum(self.alpha), self.alpha)

    @property
    def degree(self) -> int:
        return sum(self.alpha) + 1

    @property
    def dim(self) -> int:
        return len(self.alpha)

    @property
    def is_plain(self) -> bool:
        return self.point is None

    def raised(self, coord: int, by: int = 1) -> Generator:
        alpha = list(self.alpha)
        alpha[coord] += by
        return Generator(tuple(alpha), self.point)

    def shifted(self, beta: tuple[int, ...]) -> Generator:
        return Generator(tuple(a + b for a, b in zip(self.alpha, beta, strict=True)), self.point)

    def at(self, point: int | None) -> Generator:
        return Generator(self.alpha, point)

    def render(self) -> str:
        prefix = " ".join(
            f"D{u}" if k == 1 else f"D{u}^{k}" for u, k in enumerate(self.alpha) if k
        )
        body = f"({prefix} phi)" if prefix else "phi"
        if self.point is not None:
            return f"{body}(x{self.point + 1})"
        return body


def phi_generator(dim: int = 1) -> Generator:
    return Generator((0,) * dim)


@dataclass(frozen=True)
class FieldMonomial:
    """A multiset of generators; the empty monomial is the unit 1."""

    factors: tuple[Generator, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.factors, key=lambda g: g.sort_key))
        object.__setattr__(self, "factors", ordered)

    @classmethod
    def of(cls, *gens: Generator) -> FieldMonomial:
        return cls(tuple(gens))

    @property
    def degree(self) -> int:
        return sum(g.degree for g in self.factors)

    @property
    def is_unit(self) -> bool:
        return not self.factors

    @property
    def is_plain(self) -> bool:
        return all(g.is_plain for g in self.factors)

    def counts(self) -> Counter[Generator]:
        return Counter(self.factors)

    def points(self) -> set[int]:
        return {g.point for g in self.factors if g.point is not None}

    def __mul__(self, other: FieldMonomial) -> FieldMonomial:
        return FieldMonomial(self.factors + other.factors)

    def without(self, gen: Generator) -> FieldMonomial:
        factors = list(self.factors)
        factors.remove(gen)
        return FieldMonomial(tuple(factors))

    def split(self, predicate: Callable[[Generator], bool]) -> tuple[FieldMonomial, FieldMonomial]:
        yes = tuple(g for g in self.factors if predicate(g))
        no = tuple(g for g in self.factors if not predicate(g))
        return FieldMonomial(yes), FieldMonomial(no)

    @property
    def display_key(self) -> tuple:
        return tuple(g.sort_key for g in reversed(self.factors))

    def render(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        counts = self.counts()
        for g in sorted(counts, key=lambda g: g.sort_key, reverse=True):
            k = counts[g]
            parts.append(g.render() if k == 1 else f"{g.render()}^{k}")
        return "*".join(parts)


UNIT = FieldMonomial()


def render_linear(terms: Iterable[tuple[FieldMonomial, str, bool]]) -> str:
    """Join pre-rendered `(monomial, body, negative)` triples into a signed sum."""
    out = []
    for k, (_, body, negative) in enumerate(terms):
        if k == 0:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out) or "0"


def monomial_order(mono: FieldMonomial) -> tuple:
    return (mono.degree, mono.display_key)


class FieldElement:
    """A finite QQ-linear combination of field monomials."""

    __slots__ = ("terms", "dim")

    def __init__(self, terms: Mapping[FieldMonomial, Any] | None = None, dim: int = 1) -> None:
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        self.dim = dim
        clean: dict[FieldMonomial, Any] = {}
        for mono, c in (terms or {}).items():
            for g in mono.factors:
                if g.dim != dim:
                    raise ValueError(f"generator {g.render()} does not have dimension {dim}")
                if not g.is_plain:
                    raise ValueError("field elements cannot contain translated generators")
            c = to_qq(c)
            if c:
                clean[mono] = clean[mono] + c if mono in clean else c
        self.terms = {m: c for m, c in clean.items() if c}

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls, dim: int = 1) -> FieldElement:
        return cls({}, dim)

    @classmethod
    def one(cls, dim: int = 1) -> FieldElement:
        return cls({UNIT: 1}, dim)

    @classmethod
    def constant(cls, value: Any, dim: int = 1) -> FieldElement:
        return cls({UNIT: value}, dim)

    @classmethod
    def generator(cls, alpha: tuple[int, ...]) -> FieldElement:
        return cls({FieldMonomial.of(Generator(tuple(alpha))): 1}, len(alpha))

    @classmethod
    def phi(cls, dim: int = 1) -> FieldElement:
        return cls.generator((0,) * dim)

    @classmethod
    def from_monomial(cls, mono: FieldMonomial, coeff: Any = 1, dim: int = 1) -> FieldElement:
        return cls({mono: coeff}, dim)

    # ----- arithmetic ---------------------------------------------------

    def _coerce(self, other: Any) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.dim != self.dim and other.terms and self.terms:
                if not (other.is_constant() or self.is_constant()):
                    raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        return FieldElement.constant(other, self.dim)

    def __add__(self, other: Any) -> FieldElement:
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return FieldElement(terms, self.dim)

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement({m: -c for m, c in self.terms.items()}, self.dim)

    def __sub__(self, other: Any) -> FieldElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> FieldElement:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> FieldElement:
        if not isinstance(other, FieldElement):
            return self.scale(other)
        other = self._coerce(other)
        terms: dict[FieldMonomial, Any] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = ma * mb
                terms[m] = terms[m] + ca * cb if m in terms else ca * cb
        return FieldElement(terms, max(self.dim, other.dim))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> FieldElement:
        out = FieldElement.one(self.dim)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, value: Any) -> FieldElement:
        c = to_qq(value)
        return FieldElement({m: v * c for m, v in self.terms.items()}, self.dim)

    # ----- inspection ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m.is_unit for m in self.terms)

    def constant_term(self) -> Any:
        return self.terms.get(UNIT, QQ(0))

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def items(self) -> Iterator[tuple[FieldMonomial, Any]]:
        return iter(self.terms.items())

    def homogeneous_part(self, degree: int) -> FieldElement:
        return FieldElement({m: c for m, c in self.terms.items() if m.degree == degree}, self.dim)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = FieldElement.constant(other, self.dim)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def render(self) -> str:
        ordered = sorted(self.terms.items(), key=lambda mc: monomial_order(mc[0]), reverse=True)
        rows = []
        for mono, c in ordered:
            negative = c < 0
            mag = -c if negative else c
            coeff = format_rational(mag)
            if mono.is_unit:
                body = coeff
            elif coeff == "1":
                body = mono.render()
            else:
                body = f"{coeff}*{mono.render()}"
            rows.append((mono, body, negative))
        return render_linear(rows)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"FieldElement({self.render()!r})"


# ----- derivations -----------------------------------------------------------


class Derivation:
    """The Leibniz extension of a map defined on generators.

    `on_generator` returns the image of a single generator as a FieldElement;
    unit and constants are killed.
    """

    def __init__(self, on_generator: Callable[[Generator], FieldElement]) -> None:
        self._on_generator = on_generator

    def __call__(self, v: FieldElement) -> FieldElement:
        total = FieldElement.zero(v.dim)
        for mono, c in v.terms.items():
            counts = mono.counts()
            for g, k in counts.items():
                rest = FieldElement.from_monomial(mono.without(g), c * k, v.dim)
                total = total + rest * self._on_generator(g)
        return total


def apply_D(coord: int, v: FieldElement) -> FieldElement:
    """D_coord on V: D^alpha phi -> D^(alpha + e_coord) phi, extended by Leibniz."""
    if not 0 <= coord < v.dim:
        raise IndexError(f"coordinate {coord} out of range for dimension {v.dim}")
    return Derivation(lambda g: FieldElement.generator(g.raised(coord).alpha))(v)


def apply_D_power(alpha: tuple[int, ...], v: FieldElement) -> FieldElement:
    out = v
    for coord, k in enumerate(alpha):
        for _ in range(k):
            out = apply_D(coord, out)
    return out


# ----- enumeration -----------------------------------------------------------


def multi_indices(dim: int, total: int) -> Iterator[tuple[int, ...]]:
    """All alpha of length `dim` with |alpha| == total, in lexicographic order."""
    if dim == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in multi_indices(dim - 1, total - first):
            yield (first, *rest)


def multi_indices_below(dim: int, bound: int) -> Iterator[tuple[int, ...]]:
    """All alpha with |alpha| < bound, ordered by |alpha|."""
    for total in range(bound):
        yield from multi_indices(dim, total)


def factorial_of(alpha: tuple[int, ...]) -> int:
    out = 1
    for k in alpha:
        for j in range(2, k + 1):
            out *= j
    return out


def graded_basis(dim: int, max_degree: int, *, include_unit: bool = True) -> list[FieldMonomial]:
    """Monomials of V of degree <= max_degree, sorted by (degree, display order)."""
    gens = [Generator(a) for a in multi_indices_below(dim, max_degree)]
    found: list[FieldMonomial] = []

    def walk(start: int, chosen: list[Generator], degree: int) -> None:
        found.append(FieldMonomial(tuple(chosen)))
        for k in range(start, len(gens)):
            g = gens[k]
            if degree + g.degree <= max_degree:
                chosen.append(g)
                walk(k, chosen, degree + g.degree)
                chosen.pop()

    walk(0, [], 0)
    if not include_unit:
        found = [m for m in found if not m.is_unit]
    return sorted(found, key=monomial_order)


def basis_elements(dim: int, max_degree: int, *, include_unit: bool = True) -> list[FieldElement]:
    return [FieldElement.from_monomial(m, 1, dim) for m in graded_basis(dim, max_degree, include_unit=include_unit)]


def random_field_element(
    rng: random.Random, dim: int = 1, max_degree: int = 4, max_terms: int = 3
) -> FieldElement:
    basis = graded_basis(dim, max_degree)
    terms: dict[FieldMonomial, Any] = {}
    for mono in rng.sample(basis, k=min(len(basis), rng.randint(1, max_terms))):
        terms[mono] = QQ(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))
    return FieldElement(terms, dim)
