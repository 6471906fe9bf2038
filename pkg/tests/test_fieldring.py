from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from src.fieldring import (
    Derivation,
    FieldElement,
    HolomorphicVertexAlgebra,
    StateSeries,
    apply_D,
    graded_basis,
    holo_vertex,
    recover_ring,
    symbolic_translate,
    translate,
    vacuum_expectation,
)
from tests.conftest import dphi, field_elements, one, phi, space


def test_canonical_rendering():
    v = (dphi(2) * phi()).scale(2) + 1
    assert v.render() == "2*(D0^2 phi)*phi + 1"


def test_zero_renders_as_zero():
    assert FieldElement.zero().render() == "0"


def test_D_obeys_leibniz():
    assert apply_D(0, phi() ** 2) == (phi() * dphi(1)).scale(2)
    assert apply_D(0, one()).is_zero


def test_D_rejects_missing_coordinate():
    with pytest.raises(IndexError):
        apply_D(1, phi())


def test_generators_in_two_dimensions_are_distinct():
    d0 = apply_D(0, phi(2))
    d1 = apply_D(1, phi(2))
    assert d0 != d1
    assert apply_D(1, d0) == apply_D(0, d1)


def test_graded_basis_counts_by_weight():
    assert [m.render() for m in graded_basis(1, 2)] == ["1", "phi", "phi^2", "(D0 phi)"]
    assert len(graded_basis(1, 3)) == 7
    assert len(graded_basis(1, 0)) == 1


def test_translate_is_taylor_series():
    series = translate(phi(), point=0, cutoff=3)
    assert series.coefficient_element((0,)) == phi()
    assert series.coefficient_element((1,)) == dphi(1)
    assert series.coefficient_element((2,)) == dphi(2) * Fraction(1, 2)
    assert series.coefficient_element((3,)).is_zero


def test_translate_in_two_dimensions_uses_each_coordinate():
    series = translate(phi(2), point=0, cutoff=2)
    assert series.coefficient_element((0, 0)) == phi(2)
    assert series.coefficient_element((1, 0)) == apply_D(0, phi(2))
    assert series.coefficient_element((0, 1)) == apply_D(1, phi(2))
    assert series.coefficient_element((1, 1)).is_zero


def test_holo_vertex_multiplies_translate_by_the_state():
    series = holo_vertex(phi(), phi(), 2)
    assert series.coefficient_element((0,)) == phi() ** 2
    assert series.coefficient_element((1,)) == dphi(1) * phi()


def test_holo_vertex_of_unit_is_identity():
    b = phi() ** 2 + dphi(1)
    series = holo_vertex(one(), b, 4)
    assert series.coefficient_element((0,)) == b
    for k in (1, 2, 3):
        assert series.coefficient_element((k,)).is_zero


def test_symbolic_view_materializes_to_the_truncated_product():
    symbolic = symbolic_translate(phi(), 0, space(1)) * StateSeries.from_element(phi(), space(1))
    assert not symbolic.is_symbolic_free()
    materialized = symbolic.materialize(2)
    assert materialized.is_symbolic_free()
    assert materialized.equals(holo_vertex(phi(), phi(), 2))


def test_derivation_is_fixed_by_generator_images():
    count = Derivation(lambda g: one())
    assert count(phi() ** 2 * dphi(1)) == (phi() * dphi(1)).scale(2) + phi() ** 2
    assert count(one()).is_zero


def test_holomorphic_cutoff_must_reach_first_order():
    with pytest.raises(ValueError):
        HolomorphicVertexAlgebra(dim=1, cutoff=1)


def test_vacuum_expectation_is_constant_term():
    assert vacuum_expectation(phi().scale(2) + 3) == 3
    assert vacuum_expectation(phi()) == 0


@settings(max_examples=50, deadline=None)
@given(field_elements(1), field_elements(1))
def test_ring_recovered_from_holomorphic_vertex_algebra(a, b):
    ring = recover_ring(HolomorphicVertexAlgebra(dim=1, cutoff=3))
    assert ring.product(a, b) == a * b
    assert ring.derivation(a) == apply_D(0, a)


@settings(max_examples=25, deadline=None)
@given(field_elements(2, max_degree=3), field_elements(2, max_degree=3))
def test_ring_recovered_in_two_dimensions(a, b):
    ring = recover_ring(HolomorphicVertexAlgebra(dim=2, cutoff=2))
    assert ring.product(a, b) == a * b
    assert ring.derivation(a, 1) == apply_D(1, a)


@settings(max_examples=50, deadline=None)
@given(field_elements(1), field_elements(1), field_elements(1))
def test_field_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a * one() == a
    assert a + (-a) == FieldElement.zero()


@settings(max_examples=50, deadline=None)
@given(field_elements(1), field_elements(1))
def test_D_is_leibniz_on_random_pairs(a, b):
    assert apply_D(0, a * b) == apply_D(0, a) * b + a * apply_D(0, b)


@settings(max_examples=25, deadline=None)
@given(field_elements(2, max_degree=3), field_elements(2, max_degree=3))
def test_each_D_is_leibniz_and_they_commute_in_two_dimensions(a, b):
    for coord in (0, 1):
        assert apply_D(coord, a * b) == apply_D(coord, a) * b + a * apply_D(coord, b)
    assert apply_D(0, apply_D(1, a)) == apply_D(1, apply_D(0, a))


@settings(max_examples=30, deadline=None)
@given(field_elements(1, max_degree=3), field_elements(1, max_degree=3))
def test_translate_is_multiplicative(a, b):
    cutoff = 4
    product = translate(a * b, 0, cutoff)
    left, right = translate(a, 0, cutoff), translate(b, 0, cutoff)
    for k in range(cutoff):
        expected = FieldElement.zero()
        for i in range(k + 1):
            expected = expected + left.coefficient_element((i,)) * right.coefficient_element((k - i,))
        assert product.coefficient_element((k,)) == expected


@settings(max_examples=50, deadline=None)
@given(field_elements(1))
def test_vacuum_expectation_kills_derivatives(v):
    assert vacuum_expectation(apply_D(0, v)) == 0


@settings(max_examples=30, deadline=None)
@given(field_elements(1, max_degree=3))
def test_leibniz_maps_agreeing_on_generators_agree(v):
    taylor = recover_ring(HolomorphicVertexAlgebra(dim=1, cutoff=2)).derivation
    rebuilt = Derivation(lambda g: taylor(FieldElement.generator(g.alpha)))
    assert rebuilt(v) == taylor(v)
    assert rebuilt(v) == apply_D(0, v)
