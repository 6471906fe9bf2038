from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.fieldring import UNIT, FieldElement, StateSeries, basis_elements, translate
from src.fieldring.monomials import Generator
from src.freefield import (
    FreeFieldAlgebra,
    LaurentState,
    Placement,
    Propagator,
    PropagatorError,
    correlator,
    expand_state,
    perfect_matchings,
    standard_propagator,
    state_from_elements,
    wick_oracle,
)
from src.freefield.algebra import propagator_image
from src.singfun import RegionOrder, SingularFunction, parse_function
from tests.conftest import LINE, PLANE, dphi, field_elements, one, phi, space

X, Y = 1, 0


# ----- propagators -----------------------------------------------------------


def test_default_propagator_depends_on_dimension(line_algebra, plane_algebra):
    assert str(line_algebra.delta) == "x1^-2"
    assert str(plane_algebra.delta) == "q(x1)^-1"


def test_odd_literal_propagator_is_rejected():
    with pytest.raises(PropagatorError):
        Propagator(parse_function("x1^-3"))


def test_line_selector_needs_dimension_one():
    with pytest.raises(PropagatorError):
        standard_propagator(PLANE, "x^-2")


def test_propagator_must_match_spacetime():
    with pytest.raises(PropagatorError):
        FreeFieldAlgebra(LINE, propagator=standard_propagator(PLANE))


def test_phi_minus_cannot_act_at_its_own_point(line_algebra):
    with pytest.raises(ValueError):
        line_algebra.minus_image(space(1), 0, (0,), Generator((0,), 0))


def test_algebra_carries_no_mutable_state(line_algebra):
    for f in dataclasses.fields(line_algebra):
        assert not isinstance(getattr(line_algebra, f.name), dict | list | set)
    assert all(not isinstance(v, dict | list | set) for v in vars(line_algebra).values())
    hash(line_algebra.delta.snapshot())


def test_snapshot_rebuilds_the_propagator(plane_algebra):
    delta = plane_algebra.delta
    assert SingularFunction.from_snapshot(delta.snapshot()).equals(delta)


def test_images_are_keyed_by_the_sign_convention(line_algebra):
    unsigned = dataclasses.replace(line_algebra, alternating_signs=False)
    g = Generator((1,), None)
    signed_image = line_algebra.minus_image(space(1), 0, (0,), g)
    assert unsigned.minus_image(space(1), 0, (0,), g).equals(-signed_image)


def test_propagator_images_agree_across_threads(line_algebra):
    two = space(2)
    keys = [
        (point, (a,), Generator((b,), other))
        for point, other in ((0, None), (0, 1), (1, 0), (1, None))
        for a in range(4)
        for b in range(4)
    ]
    propagator_image.cache_clear()
    with ThreadPoolExecutor(max_workers=8) as pool:
        threaded = list(pool.map(lambda k: line_algebra.minus_image(two, *k), keys * 4))
    propagator_image.cache_clear()
    serial = [line_algebra.minus_image(two, *k) for k in keys]
    for i, image in enumerate(threaded):
        assert image.equals(serial[i % len(keys)])


# ----- phi^+, phi^-, phi ----------------------------------------------------


def test_phi_plus_on_vacuum_is_translated_phi(line_algebra):
    out = line_algebra.phi_plus(0, line_algebra.vacuum(1), cutoff=3)
    assert out.coefficient_element((0,)) == phi()
    assert out.coefficient_element((1,)) == dphi(1)
    assert out.coefficient_element((2,)) == dphi(2) * Fraction(1, 2)


def test_phi_plus_multiplies(line_algebra):
    out = line_algebra.phi_plus(0, line_algebra.state(phi(), 1), cutoff=2)
    assert out.coefficient_element((0,)) == phi() ** 2
    assert out.coefficient_element((1,)) == dphi(1) * phi()


@pytest.mark.parametrize(
    "state,literal",
    [
        (phi(), "x1^-2"),
        (dphi(1), "2*x1^-3"),
    ],
)
def test_phi_minus_contracts_with_the_propagator(line_algebra, state, literal):
    out = line_algebra.phi_minus(0, line_algebra.state(state, 1))
    assert out.vev().equals(parse_function(literal))


def test_phi_minus_is_a_derivation(line_algebra):
    out = line_algebra.phi_minus(0, line_algebra.state(phi() ** 2, 1))
    expected = line_algebra.state(phi(), 1).times_function(parse_function("2*x1^-2"))
    assert out.equals(expected)


def test_phi_is_the_sum_of_both_halves(line_algebra):
    s = line_algebra.state(phi(), 1)
    pole = StateSeries.monomial(space(1), UNIT, parse_function("x1^-2"))
    expected = line_algebra.phi_plus(0, s, cutoff=2) + pole
    assert line_algebra.phi_apply(0, s, cutoff=2).equals(expected)


def test_phi_on_zero_and_on_the_vacuum(line_algebra):
    zero = line_algebra.state(FieldElement.zero(), 1)
    assert line_algebra.phi_apply(0, zero, cutoff=3).is_zero
    unit = line_algebra.phi_apply(0, line_algebra.vacuum(1), cutoff=3)
    assert unit.equals(line_algebra.phi_plus(0, line_algebra.vacuum(1), cutoff=3))


# ----- products and correlators ----------------------------------------------


def test_empty_product_is_vacuum(line_algebra):
    assert line_algebra.product_at_points(0).render() == "1"


def test_two_point_function(line_algebra):
    assert str(correlator(line_algebra, 2)) == "(x1-x2)^-2"


def test_odd_correlators_vanish(line_algebra):
    assert correlator(line_algebra, 3).is_zero
    assert str(correlator(line_algebra, 3)) == "0"


def test_four_point_function_is_pairing_sum(line_algebra):
    assert str(correlator(line_algebra, 4)) == (
        "(x1-x2)^-2*(x3-x4)^-2 + (x1-x3)^-2*(x2-x4)^-2 + (x1-x4)^-2*(x2-x3)^-2"
    )


def test_four_point_function_in_two_dimensions(plane_algebra):
    assert str(correlator(plane_algebra, 4)) == (
        "q(x1-x2)^-1*q(x3-x4)^-1 + q(x1-x3)^-1*q(x2-x4)^-1 + q(x1-x4)^-1*q(x2-x3)^-1"
    )


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4, 5])
def test_correlators_match_wick_on_the_line(line_algebra, k):
    assert correlator(line_algebra, k).equals(wick_oracle(line_algebra, k))


@pytest.mark.slow
def test_six_point_function_matches_wick(line_algebra):
    assert correlator(line_algebra, 6).equals(wick_oracle(line_algebra, 6))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_correlators_match_wick_in_two_dimensions(plane_algebra, k):
    assert correlator(plane_algebra, k).equals(wick_oracle(plane_algebra, k))


def test_perfect_matching_counts():
    assert len(list(perfect_matchings(list(range(4))))) == 3
    assert len(list(perfect_matchings(list(range(6))))) == 15
    assert list(perfect_matchings([0, 1, 2])) == []


def test_negative_correlator_is_rejected(line_algebra):
    with pytest.raises(ValueError):
        correlator(line_algebra, -1)


# ----- vertex operators ------------------------------------------------------


def test_odd_propagator_breaks_commutativity_by_twice_delta(odd_algebra):
    vac = odd_algebra.vacuum(2)
    lhs = odd_algebra.vertex_op(phi(), X, odd_algebra.vertex_op(phi(), Y, vac))
    rhs = odd_algebra.vertex_op(phi(), Y, odd_algebra.vertex_op(phi(), X, vac))
    delta_xy = odd_algebra.delta.transport(space(2), {0: (X, Y)})
    assert (lhs - rhs).vev().equals(delta_xy.scale(2))


def test_phi_acting_on_phi_expands_with_double_pole(line_algebra):
    state = line_algebra.vertex_op(phi(), 0, line_algebra.state(phi(), 1))
    pieces = expand_state(state, RegionOrder.graded([0]), 3, [Placement.materialized({0: 1})]).by_exponent()
    assert pieces[-2] == one()
    assert pieces[0] == phi() ** 2
    assert pieces[1] == phi() * dphi(1)


def test_vertex_op_of_unit_is_identity(line_algebra):
    s = line_algebra.state(phi() ** 2, 1)
    assert line_algebra.vertex_op(one(), 0, s).equals(s)


@settings(max_examples=30, deadline=None)
@given(field_elements(1, max_degree=4), st.integers(1, 5))
def test_vertex_op_on_vacuum_is_translate(v, cutoff):
    algebra = FreeFieldAlgebra(LINE)
    created = algebra.vertex_op(v, 0, algebra.vacuum(1), cutoff)
    assert created.equals(translate(v, 0, cutoff, algebra.space(1)))


def test_vertex_op_on_vacuum_is_translate_in_two_dimensions(plane_algebra):
    for v in basis_elements(2, 3):
        created = plane_algebra.vertex_op(v, 0, plane_algebra.vacuum(1), 3)
        assert created.equals(translate(v, 0, 3, plane_algebra.space(1)))


@pytest.mark.parametrize("dim_fixture", ["line_algebra", "plane_algebra"])
def test_like_halves_commute(request, dim_fixture):
    algebra = request.getfixturevalue(dim_fixture)
    for c in basis_elements(algebra.dim, 3):
        s = algebra.state(c, 2)
        minus_xy = algebra.phi_minus(X, algebra.phi_minus(Y, s))
        minus_yx = algebra.phi_minus(Y, algebra.phi_minus(X, s))
        assert minus_xy.equals(minus_yx)
        plus_xy = algebra.phi_plus(X, algebra.phi_plus(Y, s))
        plus_yx = algebra.phi_plus(Y, algebra.phi_plus(X, s))
        assert plus_xy.equals(plus_yx)
        assert plus_xy.materialize(3).equals(plus_yx.materialize(3))


# ----- Laurent states ---------------------------------------------------------


def test_translation_exponentiates_D_inside_the_window():
    state = state_from_elements({(0,): phi()}, (1,), 3)
    pieces = state.translated(0).by_exponent()
    assert pieces == {0: phi(), 1: dphi(1), 2: dphi(2) * Fraction(1, 2)}


def test_residue_reads_the_inverse_power():
    state = state_from_elements({(-1,): phi(), (0,): one()}, (1,), 3)
    residue = state.residue(0)
    assert isinstance(residue, LaurentState)
    assert residue.to_element(1) == phi()
