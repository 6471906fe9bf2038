"""From tree nesting to expansion shapes, and the three-leaf coherence check.

Each internal node is represented by its largest leaf label. A child whose
representative r differs from its parent's representative R contributes the
relative coordinate u_r = x_r - x_R at the parent's depth; shallower
coordinates are outer (larger modulus) in the region. The root representative
is the largest label n, taken as the origin. In the three-leaf composite
a^(x1) b^(x2) c, leaf 1 carries a, leaf 2 carries b and leaf 3 is c at 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from src.axioms.checks import laurent_discrepancy, report, state_discrepancy
from src.fieldring.monomials import FieldElement
from src.freefield.algebra import FreeFieldAlgebra
from src.freefield.expansion import LaurentState, Placement, expand_state
from src.models import AxiomReport
from src.singfun.errors import UnsupportedExpansionError
from src.singfun.laurent import RegionOrder
from src.trees.rooted import RootedTree

SINGLE = RegionOrder.graded([0])


@dataclass(frozen=True)
class ExpansionShape:
    tree: RootedTree
    anchors: tuple[tuple[int, int], ...]
    """(leaf r, anchor R) pairs: u_r = x_r - x_R."""
    depths: tuple[tuple[int, int], ...]
    """(leaf r, depth of u_r)."""

    @property
    def origin(self) -> int:
        return self.tree.max_leaf

    @property
    def variables(self) -> tuple[int, ...]:
        """Leaves owning a relative coordinate, outer to inner."""
        depth = dict(self.depths)
        return tuple(sorted(depth, key=lambda r: (depth[r], r)))

    @property
    def is_rational(self) -> bool:
        return len({d for _, d in self.depths}) <= 1

    def var_index(self, leaf: int) -> int:
        """Region-variable index of u_leaf (leaves 1..n-1 map to 0..n-2)."""
        return leaf - 1

    def region(self) -> RegionOrder:
        return RegionOrder(tuple(self.var_index(r) for r in self.variables))

    def position(self, leaf: int) -> dict[int, int]:
        """x_leaf as a linear form in the relative coordinates."""
        anchor = dict(self.anchors)
        form: dict[int, int] = {}
        while leaf != self.origin:
            form[self.var_index(leaf)] = 1
            leaf = anchor[leaf]
        return form

    def names(self) -> tuple[str, ...]:
        return tuple(f"u{r}" for r in range(1, self.origin))

    def describe(self) -> str:
        anchor = dict(self.anchors)
        order = " >> ".join(f"|u{r}|" for r in self.variables)
        defs = ", ".join(
            f"u{r}=x{r}" if anchor[r] == self.origin else f"u{r}=x{r}-x{anchor[r]}"
            for r in sorted(anchor)
        )
        return f"{order}; {defs}" if order else "trivial"


def shape_of(p: RootedTree) -> ExpansionShape:
    anchors: list[tuple[int, int]] = []
    depths: list[tuple[int, int]] = []

    def walk(t: RootedTree, depth: int) -> None:
        rep = t.max_leaf
        for c in t.children:
            if c.max_leaf != rep:
                anchors.append((c.max_leaf, rep))
                depths.append((c.max_leaf, depth))
            if not c.is_leaf:
                walk(c, depth + 1)

    if not p.is_leaf:
        walk(p, 0)
    return ExpansionShape(p, tuple(sorted(anchors)), tuple(sorted(depths)))


def _top_base(shape: ExpansionShape, leaf: int) -> int | None:
    """Representative of the root child holding `leaf`, unless that is the origin."""
    for c in shape.tree.children:
        if leaf in c.cluster:
            return None if c.max_leaf == shape.origin else c.max_leaf
    return None


def _placement(shape: ExpansionShape, leaf: int) -> Placement:
    base = _top_base(shape, leaf)
    form = shape.position(leaf)
    if base is None:
        return Placement.materialized(form)
    return Placement(form, base=shape.var_index(base))


def shape_coherence(
    algebra: FreeFieldAlgebra,
    p: RootedTree,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    cutoff: int,
) -> AxiomReport:
    """The rational composite a^(x1) b^(x2) c, expanded in p's shape, equals p's iterated composite."""
    if p.num_leaves != 3:
        raise ValueError(f"shape coherence is defined for three-leaf trees, got {p}")
    if algebra.dim != 1:
        raise UnsupportedExpansionError("shape coherence compares region expansions and needs d = 1")
    shape = shape_of(p)
    states = [a, b, c]
    axiom = f"shape{p}"
    rational = algebra.vertex_op(a, 0, algebra.vertex_op(b, 1, algebra.state(c, 2)))
    if shape.is_rational:
        swapped = algebra.vertex_op(b, 1, algebra.vertex_op(a, 0, algebra.state(c, 2)))
        return report(axiom, states, cutoff, state_discrepancy(rational, swapped), "rational")

    region = shape.region()
    names = shape.names()
    placement = [_placement(shape, 1), _placement(shape, 2)]
    expected = expand_state(rational, region, cutoff, placement, names)

    inner = next(child for child in p.children if not child.is_leaf)
    outer_leaf = next(child.label for child in p.children if child.is_leaf)
    inner_var = shape.var_index(min(inner.cluster))
    iterated = LaurentState(region.weight_vector, {}, cutoff, names)
    if shape.origin not in inner.cluster:
        # (a^(u1) b)^(u2) c: the pair acts from the inner cluster representative
        pair_var = shape.var_index(inner.max_leaf)
        pieces = _pieces(algebra, a, b, cutoff)
        for k, u in pieces.items():
            outer = algebra.vertex_op(u, 0, algebra.state(c, 1))
            iterated = iterated + _lifted(outer, region, cutoff - k, pair_var, names).shift(
                _unit(inner_var, k, 2)
            )
    else:
        # the inner leaf acts on c first; the outer leaf's operator acts on each coefficient
        inner_elem, outer_elem = (a, b) if outer_leaf == 2 else (b, a)
        pieces = _pieces(algebra, inner_elem, c, cutoff)
        outer_var = shape.var_index(outer_leaf)  # type: ignore[arg-type]
        for k, w in pieces.items():
            outer = algebra.vertex_op(outer_elem, 0, algebra.state(w, 1))
            iterated = iterated + _lifted(outer, region, cutoff - k, outer_var, names).shift(
                _unit(inner_var, k, 2)
            )
    return report(axiom, states, cutoff, laurent_discrepancy(expected, iterated), shape.describe())


def _pieces(
    algebra: FreeFieldAlgebra, op: FieldElement, target: FieldElement, cutoff: int
) -> dict[int, FieldElement]:
    inner = algebra.vertex_op(op, 0, algebra.state(target, 1))
    expanded = expand_state(inner, SINGLE, cutoff, [Placement.materialized({0: 1})])
    return {k: u for k, u in expanded.by_exponent().items() if not u.is_zero}


def _lifted(state, region: RegionOrder, window: int, var: int, names) -> LaurentState:
    return expand_state(state, region, window, [Placement.at(var)], names)


def _unit(var: int, k: int, n: int) -> tuple[int, ...]:
    return tuple(k if i == var else 0 for i in range(n))
