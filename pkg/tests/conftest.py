"""Test fixtures and shared helpers."""

from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from src.fieldring.monomials import FieldElement, apply_D_power, random_field_element
from src.freefield.algebra import FreeFieldAlgebra, standard_propagator
from src.singfun.functions import SingularFunction
from src.singfun.spaces import Factor, FunctionSpace, SingularitySpec, SpacetimeSpec

LINE = SpacetimeSpec(1)
PLANE = SpacetimeSpec(2)


def phi(dim: int = 1) -> FieldElement:
    return FieldElement.phi(dim)


def dphi(k: int, dim: int = 1) -> FieldElement:
    """D0^k phi."""
    return apply_D_power((k,) + (0,) * (dim - 1), phi(dim))


def one(dim: int = 1) -> FieldElement:
    return FieldElement.one(dim)


def space(num_points: int, spacetime: SpacetimeSpec = LINE) -> FunctionSpace:
    return FunctionSpace(spacetime, SingularitySpec(), num_points)


def field_elements(dim: int = 1, max_degree: int = 4, max_terms: int = 3):
    """Hypothesis strategy for seeded random FieldElements."""
    return st.integers(min_value=0, max_value=100_000).map(
        lambda seed: random_field_element(random.Random(seed), dim, max_degree, max_terms)
    )


def _two_point_function(numerator: dict, pair_power: int, point_power: int) -> SingularFunction:
    s = space(2)
    exponents = {Factor.pair(0, 1)[0]: pair_power, Factor.point(0): point_power}
    return SingularFunction.from_factors(
        s, s.ring.from_dict(numerator), {f: e for f, e in exponents.items() if e}
    )


def singular_functions(max_pair: int = 3, max_point: int = 2):
    """Hypothesis strategy for two-point functions P / ((x1 - x2)^n x1^m) on the line."""
    numerators = st.dictionaries(
        st.tuples(st.integers(0, 3), st.integers(0, 3)),
        st.integers(-4, 4).filter(bool),
        min_size=1,
        max_size=4,
    )
    return st.builds(
        _two_point_function,
        numerators,
        st.integers(0, max_pair),
        st.integers(0, max_point),
    )


@pytest.fixture
def line_algebra() -> FreeFieldAlgebra:
    return FreeFieldAlgebra(LINE)


@pytest.fixture
def plane_algebra() -> FreeFieldAlgebra:
    return FreeFieldAlgebra(PLANE)


@pytest.fixture
def odd_algebra() -> FreeFieldAlgebra:
    """Delta = x^-3: the negative control for every evenness-dependent identity."""
    return FreeFieldAlgebra(LINE, propagator=standard_propagator(LINE, "x^-3"))


@pytest.fixture
def unsigned_algebra() -> FreeFieldAlgebra:
    """phi^- without the (-1)^|beta| sign: skew symmetry must fail."""
    return FreeFieldAlgebra(LINE, alternating_signs=False)
