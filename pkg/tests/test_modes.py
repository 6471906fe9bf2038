from __future__ import annotations

from itertools import product

import pytest

from src.fieldring.monomials import basis_elements
from src.modes import (
    ModeOperator,
    check_double_integral,
    check_integration_by_parts,
    check_order1,
    mode,
)
from src.pipeline.suite import sample_states
from src.singfun import UnsupportedExpansionError
from tests.conftest import dphi, one, phi


def test_mode_minus_one_on_vacuum_is_the_state(line_algebra):
    assert mode(line_algebra, phi(), -1, one(), 5) == phi()


def test_zero_mode_on_vacuum_vanishes(line_algebra):
    assert mode(line_algebra, phi(), 0, one(), 5).is_zero


def test_first_mode_reads_the_double_pole(line_algebra):
    assert mode(line_algebra, phi(), 1, phi(), 5) == one()


def test_zero_mode_of_phi_on_phi_vanishes(line_algebra):
    assert mode(line_algebra, phi(), 0, phi(), 5).is_zero


def test_mode_is_linear_in_the_state(line_algebra):
    s, t = phi() ** 2, dphi(1)
    combined = mode(line_algebra, phi(), 1, s.scale(2) + t, 5)
    assert combined == mode(line_algebra, phi(), 1, s, 5).scale(2) + mode(line_algebra, phi(), 1, t, 5)


@pytest.mark.parametrize("n", [-2, -1, 0, 1, 2])
def test_mode_is_linear_in_the_field(line_algebra, n):
    a, b = phi() ** 2, dphi(1) + phi()
    for s in (one(), phi(), phi() * dphi(1)):
        combined = mode(line_algebra, a.scale(3) - b, n, s, 6)
        separate = mode(line_algebra, a, n, s, 6).scale(3) - mode(line_algebra, b, n, s, 6)
        assert combined == separate


def test_mode_operator_records_degree_shift(line_algebra):
    op = ModeOperator(line_algebra, phi(), 1)
    assert op(phi()) == one()
    assert op.degree_shift == -1


def test_modes_need_a_line(plane_algebra):
    with pytest.raises(UnsupportedExpansionError):
        mode(plane_algebra, phi(2), 0, one(2), 5)


@pytest.mark.parametrize("n", [-1, 0, 1, 2, 3])
def test_integration_by_parts(line_algebra, n):
    for a in (phi(), phi() ** 2):
        for s in (one(), phi(), dphi(1)):
            assert check_integration_by_parts(line_algebra, a, n, s, 6).holds


@pytest.mark.parametrize(
    "a,b,c,cutoff",
    [
        (phi(), phi(), one(), 5),
        (phi() ** 2, phi(), one(), 4),
        (one(), phi(), phi(), 4),
    ],
)
def test_order_one(line_algebra, a, b, c, cutoff):
    report = check_order1(line_algebra, a, b, [c], cutoff)
    assert report.holds, report.render()
    assert report.axiom == "order1"


@pytest.mark.parametrize(
    "a,b,c",
    [
        (phi(), phi(), phi()),
        (phi() ** 2, phi(), phi()),
        (phi(), dphi(1), one()),
    ],
)
def test_double_integral(line_algebra, a, b, c):
    assert check_double_integral(line_algebra, a, b, [c], 5).holds


@pytest.mark.slow
def test_residue_identities_on_degree_three_basis(line_algebra):
    samples = sample_states(1, 3, seed=0)
    for a, b in product(basis_elements(1, 3), repeat=2):
        assert check_order1(line_algebra, a, b, samples, 6).holds
        assert check_double_integral(line_algebra, a, b, samples, 6).holds


@pytest.mark.parametrize("cutoff", [4, 5, 6])
def test_order_one_compares_materialized_monomials(line_algebra, cutoff):
    report = check_order1(line_algebra, phi() ** 2, phi(), [one(), phi()], cutoff)
    assert report.holds, report.render()
    assert report.discrepancy is None


def test_order_one_sees_a_wrong_zero_mode(line_algebra, mocker):
    def shifted(algebra, a, n, s, cutoff):
        out = mode(algebra, a, n, s, cutoff)
        return out + dphi(1) if s == phi() else out

    mocker.patch("src.modes.residues.mode", side_effect=shifted)
    report = check_order1(line_algebra, phi() ** 2, phi(), [one()], 4)
    assert not report.holds
