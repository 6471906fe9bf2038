"""The holomorphic vertex algebra of V and the way back to (V, ., D)."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from src.fieldring.monomials import FieldElement, FieldMonomial
from src.fieldring.states import StateSeries
from src.singfun.functions import SingularFunction
from src.singfun.spaces import FunctionSpace, SpacetimeSpec


def default_space(dim: int, num_points: int = 1) -> FunctionSpace:
    return FunctionSpace(SpacetimeSpec(dim), num_points=num_points)


def symbolic_translate(v: FieldElement, point: int, space: FunctionSpace) -> StateSeries:
    """v with every generator D^alpha phi replaced by T_point^alpha (e^{xD} is a ring map)."""
    terms = {}
    for mono, c in v.terms.items():
        moved = FieldMonomial(tuple(g.at(point) for g in mono.factors))
        terms[moved] = SingularFunction.constant(space, c)
    return StateSeries(space, terms)


def translate(
    v: FieldElement, point: int = 0, cutoff: int = 5, space: FunctionSpace | None = None
) -> StateSeries:
    """sum over |alpha| < cutoff of x^alpha D^alpha v / alpha!, polynomial in x_point."""
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    space = space or default_space(v.dim, point + 1)
    return symbolic_translate(v, point, space).materialize(cutoff, points=[point])


def holo_vertex(
    a: FieldElement, b: FieldElement, cutoff: int, space: FunctionSpace | None = None
) -> StateSeries:
    """V(a, x) b = sum_i (D^i a) b x^i / i!."""
    space = space or default_space(max(a.dim, b.dim))
    return translate(a, 0, cutoff, space) * StateSeries.from_element(b, space)


@dataclass(frozen=True)
class HolomorphicVertexAlgebra:
    dim: int = 1
    cutoff: int = 3

    def __post_init__(self) -> None:
        if self.cutoff < 2:
            raise ValueError("the derivation is read off x^1, so cutoff must be >= 2")

    @property
    def space(self) -> FunctionSpace:
        return default_space(self.dim)

    def vertex(self, a: FieldElement, b: FieldElement) -> StateSeries:
        return holo_vertex(a, b, self.cutoff, self.space)


@dataclass(frozen=True)
class RecoveredRing:
    product: Callable[[FieldElement, FieldElement], FieldElement]
    derivation: Callable[..., FieldElement]


def recover_ring(holo: HolomorphicVertexAlgebra) -> RecoveredRing:
    """ab = V(a, 0) b and D_u a = coefficient of x_u in V(a, x) 1."""
    zero = (0,) * holo.dim

    def product(a: FieldElement, b: FieldElement) -> FieldElement:
        return holo.vertex(a, b).coefficient_element(zero)

    def derivation(a: FieldElement, coord: int = 0) -> FieldElement:
        if not 0 <= coord < holo.dim:
            raise IndexError(f"coordinate {coord} out of range for dimension {holo.dim}")
        exps = tuple(1 if u == coord else 0 for u in range(holo.dim))
        return holo.vertex(a, FieldElement.one(holo.dim)).coefficient_element(exps)

    return RecoveredRing(product, derivation)


def vacuum_expectation(v: FieldElement) -> Any:
    """Tr: the coefficient of the unit monomial."""
    return v.constant_term()
