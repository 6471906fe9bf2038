from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.singfun import (
    LaurentSeries,
    LiteralSyntaxError,
    RegionOrder,
    SingularFunction,
    SpecMismatchError,
    UnsupportedExpansionError,
    WindowError,
    expand,
    parse_function,
)
from tests.conftest import PLANE, singular_functions, space

X_OUTER = RegionOrder((0, 1))
Y_OUTER = RegionOrder((1, 0))

LITERALS = [
    "(x1-x2)^-1",
    "(x1-x2)^-2",
    "x1^2 - 3*x2",
    "x1*(x1-x2)^-3",
    "1/2 + x2^2*(x1-x2)^-1",
    "(x2-x1)^-2*x1",
]


# ----- functions and their text form -------------------------------------------


def test_pair_factor_renders_canonically():
    assert str(parse_function("(x1-x2)^-2")) == "(x1-x2)^-2"


def test_reversed_pair_is_negated_factor():
    assert parse_function("(x2-x1)^-1").equals(-parse_function("(x1-x2)^-1"))


def test_monomial_point_factors_cancel():
    assert parse_function("x1*x1^-2").equals(parse_function("x1^-1"))


def test_derivative_of_pole():
    f = parse_function("(x1-x2)^-1")
    assert f.diff(0).equals(parse_function("-(x1-x2)^-2"))
    assert f.diff(1).equals(parse_function("(x1-x2)^-2"))


def test_reflection_distinguishes_even_and_odd():
    even = parse_function("x1^-2")
    odd = parse_function("x1^-3")
    assert even.reflect().equals(even)
    assert odd.reflect().equals(-odd)


def test_quadratic_form_factor_in_two_dimensions():
    f = parse_function("q(x1-x2)^-1", PLANE)
    assert f.num_points == 2
    assert str(f) == "q(x1-x2)^-1"


def test_literal_syntax_error_reports_position():
    with pytest.raises(LiteralSyntaxError) as err:
        parse_function("x1 + ?")
    assert err.value.position == 5


def test_negative_power_needs_denominator_factor():
    with pytest.raises(LiteralSyntaxError):
        parse_function("(x1+1)^-1")


def test_literal_needs_enough_points():
    with pytest.raises(SpecMismatchError):
        parse_function("x3^-1", num_points=2)


def test_arithmetic_requires_same_space():
    with pytest.raises(SpecMismatchError):
        parse_function("x1") + SingularFunction.one(space(3))


def test_inverse_quadratic_form_times_form_is_one():
    inverse = parse_function("q(x1-x2)^-1", PLANE)
    form = parse_function("q(x1-x2)", PLANE)
    assert (inverse * form).equals(SingularFunction.one(space(2, PLANE)))
    assert not (inverse * inverse).equals(SingularFunction.one(space(2, PLANE)))


@settings(max_examples=100, deadline=None)
@given(singular_functions())
def test_partial_derivatives_commute(f):
    assert f.diff(0).diff(1).equals(f.diff(1).diff(0))
    assert f.diff(0).diff(0).diff(1).equals(f.diff(1).diff(0).diff(0))


@settings(max_examples=100, deadline=None)
@given(singular_functions(), st.integers(1, 3))
def test_cross_multiplication_equivalence_is_transitive(f, k):
    pole = parse_function(f"(x1-x2)^-{k}")
    zero_at_pole = parse_function(f"(x1-x2)^{k}")
    padded = (f * zero_at_pole) * pole
    swapped = (f * pole) * zero_at_pole
    assert f.equals(padded)
    assert padded.equals(swapped)
    assert f.equals(swapped)
    assert not f.equals(swapped + pole)


# ----- region expansion ------------------------------------------------------


def test_expand_geometric_series_outside_in():
    series = expand(parse_function("(x1-x2)^-1"), X_OUTER, 5)
    assert str(series) == "x1^-1 + x1^-2*x2 + x1^-3*x2^2 + x1^-4*x2^3 + x1^-5*x2^4"


def test_two_regions_have_different_residues():
    f = parse_function("(x1-x2)^-1")
    assert expand(f, X_OUTER, 4).residue(0).terms == {(0,): 1}
    assert expand(f, Y_OUTER, 4).residue(0).terms == {}


def test_coefficient_outside_window_raises():
    series = expand(parse_function("(x1-x2)^-1"), X_OUTER, 3)
    assert series.coefficient((-3, 2)) == 1
    with pytest.raises(WindowError):
        series.coefficient((-4, 3))


def test_expand_refuses_higher_dimensions():
    with pytest.raises(UnsupportedExpansionError):
        expand(parse_function("q(x1-x2)^-1", PLANE), X_OUTER, 3)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(LITERALS), st.sampled_from(LITERALS))
def test_expansion_of_literals_is_multiplicative(a, b):
    f, g = parse_function(a, num_points=2), parse_function(b, num_points=2)
    lhs = expand(f * g, X_OUTER, 4)
    rhs = expand(f, X_OUTER, 4) * expand(g, X_OUTER, 4)
    assert lhs.equal_within(rhs)


@settings(max_examples=100, deadline=None)
@given(singular_functions(), singular_functions(), st.sampled_from([X_OUTER, Y_OUTER]))
def test_expansion_is_a_ring_map(f, g, region):
    assert expand(f + g, region, 4).equal_within(expand(f, region, 4) + expand(g, region, 4))
    assert expand(f * g, region, 4).equal_within(expand(f, region, 4) * expand(g, region, 4))


@settings(max_examples=100, deadline=None)
@given(singular_functions(max_pair=0, max_point=0))
def test_polynomials_expand_the_same_in_every_region(f):
    outer = expand(f, X_OUTER, 8)
    inner = expand(f, Y_OUTER, 8)
    assert outer.terms == inner.terms
    assert outer.terms == dict(f.buckets[()].items())


@settings(max_examples=100, deadline=None)
@given(
    st.dictionaries(
        st.tuples(st.integers(-4, 4), st.integers(0, 4)),
        st.integers(-5, 5).filter(bool),
        max_size=8,
    )
)
def test_residue_of_derivative_vanishes(terms):
    series = LaurentSeries((0, 1), terms)
    assert series.diff(0).residue(0).terms == {}


def test_residue_needs_certified_coefficient():
    with pytest.raises(WindowError):
        LaurentSeries((1,), {}, window=-1).residue(0)
