"""Modes a_n s = Res_x x^n Y(a, x) s and the order-one identities (d = 1).

Residues are taken with the integration variable outermost, so singular
coefficients in x are expanded around x before the x^-1 coefficient is read.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from src.axioms.checks import element_discrepancy, laurent_discrepancy, report
from src.fieldring.monomials import FieldElement, apply_D
from src.freefield.algebra import FreeFieldAlgebra
from src.freefield.expansion import Placement, expand_state
from src.models import AxiomReport, Discrepancy
from src.singfun.errors import UnsupportedExpansionError
from src.singfun.laurent import RegionOrder

SINGLE = RegionOrder.graded([0])
Y, X = 0, 1
# |x| >> |y|: x of weight 1 outermost, y of weight 2
X_OUTER = RegionOrder((X, Y), (1, 2))
Y_ONLY = RegionOrder((Y,), (2,))
NAMES = ("y", "x")


def _require_line(algebra: FreeFieldAlgebra) -> None:
    if algebra.dim != 1:
        raise UnsupportedExpansionError(f"modes are only defined in dimension 1, got d={algebra.dim}")


def mode(algebra: FreeFieldAlgebra, a: FieldElement, n: int, s: FieldElement, cutoff: int) -> FieldElement:
    """Res_x x^n vertex_op(a, x, s); WindowError when cutoff < 1."""
    _require_line(algebra)
    state = algebra.vertex_op(a, 0, algebra.state(s, 1))
    expanded = expand_state(state, SINGLE, cutoff - 1 - n, [Placement.materialized({0: 1})], ("x",))
    return expanded.shift((n,)).residue(0).to_element(algebra.dim)


@dataclass(frozen=True)
class ModeOperator:
    """s -> a_n s for fixed a and n."""

    algebra: FreeFieldAlgebra
    source: FieldElement
    index: int
    cutoff: int = 5

    def __call__(self, s: FieldElement) -> FieldElement:
        return mode(self.algebra, self.source, self.index, s, self.cutoff)

    @property
    def degree_shift(self) -> int | None:
        """deg(a_n s) - deg(s) for homogeneous a with Delta of degree -2; None otherwise."""
        degrees = {m.degree for m in self.source.terms}
        if len(degrees) != 1 or self.algebra.delta.low_degree() != -2:
            return None
        return degrees.pop() - self.index - 1


def check_integration_by_parts(
    algebra: FreeFieldAlgebra, a: FieldElement, n: int, s: FieldElement, cutoff: int
) -> AxiomReport:
    """mode(Da, n, s) = -n mode(a, n-1, s)."""
    lhs = mode(algebra, apply_D(0, a), n, s, cutoff)
    rhs = mode(algebra, a, n - 1, s, cutoff).scale(-n)
    return report(f"integration-by-parts[n={n}]", [a, s], cutoff, element_discrepancy(rhs, lhs))


def check_order1(
    algebra: FreeFieldAlgebra,
    a: FieldElement,
    b: FieldElement,
    samples: Sequence[FieldElement],
    cutoff: int,
) -> AxiomReport:
    """a_0 (b^y c) - b^y (a_0 c) = (a_0 b)^y c on every sample c.

    The first term is Res_x of a^x b^y c expanded with |x| >> |y|; the others
    are exact one-point states expanded in y alone. Every side materializes
    its translated generators so the monomials compare key for key.
    """
    _require_line(algebra)
    window = 2 * cutoff - 1
    a0b = mode(algebra, a, 0, b, cutoff)
    found: Discrepancy | None = None
    for c in samples:
        two_point = algebra.vertex_op(a, X, algebra.vertex_op(b, Y, algebra.state(c, 2)))
        placement = [Placement.materialized({Y: 1}), Placement.materialized({X: 1})]
        first = expand_state(two_point, X_OUTER, window, placement, NAMES).residue(X)
        a0c = mode(algebra, a, 0, c, cutoff)
        second = _one_point(algebra, b, a0c, window + 1)
        rhs = _one_point(algebra, a0b, c, window + 1)
        found = laurent_discrepancy(rhs, first - second)
        if found is not None:
            break
    region = X_OUTER.describe(NAMES)
    return report("order1", [a, b, *samples], cutoff, found, region)


def _one_point(algebra: FreeFieldAlgebra, u: FieldElement, c: FieldElement, window: int):
    state = algebra.vertex_op(u, 0, algebra.state(c, 1))
    return expand_state(state, Y_ONLY, window, [Placement.materialized({0: 1})], NAMES[:1])


def check_double_integral(
    algebra: FreeFieldAlgebra,
    a: FieldElement,
    b: FieldElement,
    samples: Sequence[FieldElement],
    cutoff: int,
) -> AxiomReport:
    """a_0 b_0 c - b_0 a_0 c = (a_0 b)_0 c on every sample c."""
    _require_line(algebra)
    a0b = mode(algebra, a, 0, b, cutoff)
    found: Discrepancy | None = None
    for c in samples:
        lhs = mode(algebra, a, 0, mode(algebra, b, 0, c, cutoff), cutoff) - mode(
            algebra, b, 0, mode(algebra, a, 0, c, cutoff), cutoff
        )
        rhs = mode(algebra, a0b, 0, c, cutoff)
        found = element_discrepancy(rhs, lhs)
        if found is not None:
            break
    return report("double-integral", [a, b, *samples], cutoff, found)
