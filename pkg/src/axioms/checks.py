"""Identity checks for the free-field vertex algebra.

Every check returns an AxiomReport; a mathematical failure is a report with
verdict `fails` and the first discrepant coefficient, never an exception.
Point 0 is y and point 1 is x wherever two insertion points are involved.
"""

from __future__ import annotations

from collections.abc import Sequence

from src.fieldring.monomials import FieldElement, apply_D
from src.fieldring.states import StateSeries
from src.freefield.algebra import FreeFieldAlgebra
from src.freefield.expansion import LaurentState, Placement, expand_state
from src.models import AxiomReport, Discrepancy, Verdict
from src.singfun.errors import UnsupportedExpansionError
from src.singfun.laurent import RegionOrder
from src.singfun.render import format_rational, render_terms

Y, X = 0, 1
SINGLE = RegionOrder.graded([0])
# |y| >> |x| with y outermost (weight 0) and x of weight 1
Y_OUTER = RegionOrder((Y, X))
REGION_NAMES = ("y", "x")


def _names(elements: Sequence[FieldElement]) -> list[str]:
    return [e.render() for e in elements]


def report(
    axiom: str,
    states: Sequence[FieldElement],
    cutoff: int,
    discrepancy: Discrepancy | None,
    region: str | None = None,
) -> AxiomReport:
    return AxiomReport(
        axiom=axiom,
        states=_names(states),
        cutoff=cutoff,
        region=region,
        verdict=Verdict.HOLDS if discrepancy is None else Verdict.FAILS,
        discrepancy=discrepancy,
    )


def state_discrepancy(expected: StateSeries, actual: StateSeries) -> Discrepancy | None:
    mono = expected.first_difference(actual)
    if mono is None:
        return None
    return Discrepancy(
        monomial=mono.render(),
        degree=mono.degree,
        expected=str(expected.coefficient(mono)),
        actual=str(actual.coefficient(mono)),
    )


def laurent_discrepancy(expected: LaurentState, actual: LaurentState) -> Discrepancy | None:
    found = expected.first_difference(actual)
    if found is None:
        return None
    mono, exps = found
    a = expected.coefficient(mono).terms.get(exps, 0)
    b = actual.coefficient(mono).terms.get(exps, 0)
    return Discrepancy(
        monomial=mono.render(),
        degree=mono.degree,
        exponent=render_terms(expected.names, [(exps, 1)]),
        expected=format_rational(a) if a else "0",
        actual=format_rational(b) if b else "0",
    )


def element_discrepancy(expected: FieldElement, actual: FieldElement) -> Discrepancy | None:
    diff = expected - actual
    if diff.is_zero:
        return None
    mono = min(diff.terms, key=lambda m: (m.degree, m.display_key))
    return Discrepancy(
        monomial=mono.render(),
        degree=mono.degree,
        expected=format_rational(expected.terms.get(mono, 0)) if mono in expected.terms else "0",
        actual=format_rational(actual.terms.get(mono, 0)) if mono in actual.terms else "0",
    )


def _require_line(algebra: FreeFieldAlgebra, axiom: str) -> None:
    if algebra.dim != 1:
        raise UnsupportedExpansionError(f"{axiom} compares region expansions and needs d = 1")


# ----- unit and locality -----------------------------------------------------


def check_identity(algebra: FreeFieldAlgebra, b: FieldElement, cutoff: int) -> AxiomReport:
    """1^x b = b, with Y(1, x) b materialized below `cutoff`."""
    s = algebra.state(b, 1)
    actual = algebra.vertex_op(FieldElement.one(algebra.dim), 0, s, cutoff)
    return report("identity", [b], cutoff, state_discrepancy(s, actual))


def check_commutativity(
    algebra: FreeFieldAlgebra, a: FieldElement, b: FieldElement, c: FieldElement, cutoff: int
) -> AxiomReport:
    """a^x b^y c = b^y a^x c, compared as rational forms with Taylor parts below `cutoff`."""
    s = algebra.state(c, 2)
    lhs = algebra.vertex_op(a, X, algebra.vertex_op(b, Y, s), cutoff)
    rhs = algebra.vertex_op(b, Y, algebra.vertex_op(a, X, s), cutoff)
    return report("commutativity", [a, b, c], cutoff, state_discrepancy(lhs, rhs))


def check_commutator_relation(
    algebra: FreeFieldAlgebra, c: FieldElement, cutoff: int
) -> AxiomReport:
    """[phi^-(x), phi^+(y)] c = Delta(x - y) c and [phi^+(x), phi^-(y)] c = -Delta(x - y) c.

    Both commutators are materialized below `cutoff` before comparing.
    """
    s = algebra.state(c, 2)
    delta_xy = algebra.delta.transport(algebra.space(2), {0: (X, Y)})
    expected = s.times_function(delta_xy)
    first = algebra.phi_minus(X, algebra.phi_plus(Y, s)) - algebra.phi_plus(Y, algebra.phi_minus(X, s))
    found = state_discrepancy(expected, first.materialize(cutoff))
    if found is None:
        second = algebra.phi_plus(X, algebra.phi_minus(Y, s)) - algebra.phi_minus(
            Y, algebra.phi_plus(X, s)
        )
        found = state_discrepancy(-expected, second.materialize(cutoff))
    return report("commutator", [c], cutoff, found)


# ----- associativity and skew symmetry ------------------------------------------


def check_associativity(
    algebra: FreeFieldAlgebra, a: FieldElement, b: FieldElement, c: FieldElement, cutoff: int
) -> AxiomReport:
    """(a^x b)^y c = a^(x+y) (b^y c), both expanded with |y| >> |x|.

    The left side expands a^x b in x, then applies Y(u_k, y) to c for each
    x^k coefficient u_k; the right side is the rational two-point state with
    z = x + y substituted and T_z rebased onto y.
    """
    _require_line(algebra, "associativity")
    inner = algebra.vertex_op(a, 0, algebra.state(b, 1))
    pieces = expand_state(inner, SINGLE, cutoff, [Placement.materialized({0: 1})]).by_exponent()
    lhs = LaurentState(Y_OUTER.weight_vector, {}, cutoff, REGION_NAMES)
    for k, u in pieces.items():
        if u.is_zero:
            continue
        outer = algebra.vertex_op(u, 0, algebra.state(c, 1))
        expanded = expand_state(outer, Y_OUTER, cutoff - k, [Placement.at(Y)], REGION_NAMES)
        lhs = lhs + expanded.shift((0, k))

    two_point = algebra.vertex_op(a, X, algebra.vertex_op(b, Y, algebra.state(c, 2)))
    placement = [Placement.at(Y), Placement({Y: 1, X: 1}, base=Y)]
    rhs = expand_state(two_point, Y_OUTER, cutoff, placement, REGION_NAMES)
    region = Y_OUTER.describe(REGION_NAMES)
    return report("associativity", [a, b, c], cutoff, laurent_discrepancy(rhs, lhs), region)


def check_skew(algebra: FreeFieldAlgebra, a: FieldElement, b: FieldElement, cutoff: int) -> AxiomReport:
    """a^x b = e^(xD) (b^(-x) a)."""
    _require_line(algebra, "skew")
    names = ("x",)
    lhs = expand_state(
        algebra.vertex_op(a, 0, algebra.state(b, 1)),
        SINGLE,
        cutoff,
        [Placement.materialized({0: 1})],
        names,
    )
    flipped = expand_state(
        algebra.vertex_op(b, 0, algebra.state(a, 1)),
        SINGLE,
        cutoff,
        [Placement.materialized({0: -1})],
        names,
    )
    rhs = flipped.translated(0)
    return report("skew", [a, b], cutoff, laurent_discrepancy(lhs, rhs), SINGLE.describe(names))


# ----- translation covariance ------------------------------------------------


def check_bilinear_invariance(
    algebra: FreeFieldAlgebra, a: FieldElement, b: FieldElement, cutoff: int
) -> AxiomReport:
    """m(a, b) = a^x b^y 1 is covariant in each argument and on the target."""
    vac = algebra.vacuum(2)

    def m(u: FieldElement, v: FieldElement) -> StateSeries:
        return algebra.vertex_op(u, X, algebra.vertex_op(v, Y, vac))

    base = m(a, b)
    found: Discrepancy | None = None
    for coord in range(algebra.dim):
        d_x = base.diff_point(X, coord)
        d_y = base.diff_point(Y, coord)
        found = (
            state_discrepancy(d_x, m(apply_D(coord, a), b))
            or state_discrepancy(d_y, m(a, apply_D(coord, b)))
            or state_discrepancy(d_x + d_y, base.apply_D(coord))
        )
        if found is not None:
            break
    return report("bilinear-invariance", [a, b], cutoff, found)


def check_translation_covariance(
    algebra: FreeFieldAlgebra, v: FieldElement, s: FieldElement, cutoff: int
) -> AxiomReport:
    """vertex_op(D_u v, x, s) = d/dx_u vertex_op(v, x, s)."""
    state = algebra.state(s, 1)
    base = algebra.vertex_op(v, 0, state)
    found = None
    for coord in range(algebra.dim):
        shifted = algebra.vertex_op(apply_D(coord, v), 0, state)
        found = state_discrepancy(base.diff_point(0, coord), shifted)
        if found is not None:
            break
    return report("translation-covariance", [v, s], cutoff, found)
