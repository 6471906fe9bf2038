"""Exhaustive checks of the grafting and collapsing laws on small trees."""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence

from src.models import AxiomReport, Discrepancy, Verdict
from src.trees.rooted import RootedTree, collapse, collapse_all, corolla, enumerate_trees, graft


def _report(axiom: str, max_leaves: int, found: Discrepancy | None) -> AxiomReport:
    return AxiomReport(
        axiom=f"{axiom}[n<={max_leaves}]",
        cutoff=0,
        verdict=Verdict.HOLDS if found is None else Verdict.FAILS,
        discrepancy=found,
    )


def _mismatch(label: str, expected: RootedTree, actual: RootedTree) -> Discrepancy:
    return Discrepancy(
        monomial=label, degree=actual.num_leaves, expected=str(expected), actual=str(actual)
    )


def _tuples(
    by_size: dict[int, list[RootedTree]], total_max: int, length: int
) -> Iterator[tuple[RootedTree, ...]]:
    """Tuples of trees whose leaf counts sum to at most total_max."""
    for sizes in itertools.product(range(1, total_max + 1), repeat=length):
        if sum(sizes) <= total_max:
            yield from itertools.product(*(by_size[n] for n in sizes))


def _split(items: Sequence[RootedTree], counts: Sequence[int]) -> list[list[RootedTree]]:
    out, start = [], 0
    for k in counts:
        out.append(list(items[start : start + k]))
        start += k
    return out


def check_graft_associativity(max_leaves: int = 5) -> AxiomReport:
    """graft(graft(p, qs), rs) = graft(p, [graft(q_i, rs_i)]) on all trees up to max_leaves."""
    by_size = {n: enumerate_trees(n) for n in range(1, max_leaves + 1)}
    for n in range(1, max_leaves + 1):
        for p in by_size[n]:
            for qs in _tuples(by_size, max_leaves, n):
                middle = graft(p, qs)
                for rs in _tuples(by_size, max_leaves, middle.num_leaves):
                    left = graft(middle, rs)
                    groups = _split(rs, [q.num_leaves for q in qs])
                    right = graft(p, [graft(q, g) for q, g in zip(qs, groups, strict=True)])
                    if left != right:
                        return _report("graft-associativity", max_leaves, _mismatch(str(p), left, right))
    return _report("graft-associativity", max_leaves, None)


def check_collapse_laws(max_leaves: int = 5) -> AxiomReport:
    """Disjoint collapses commute and collapsing every edge reaches the corolla."""
    for n in range(1, max_leaves + 1):
        for p in enumerate_trees(n):
            target = corolla(n)
            if collapse_all(p) != target:
                return _report("collapse", max_leaves, _mismatch(str(p), target, collapse_all(p)))
            for e, f in itertools.combinations(p.internal_edges(), 2):
                if e & f:
                    continue
                ef = collapse(collapse(p, e), f)
                fe = collapse(collapse(p, f), e)
                if ef != fe:
                    return _report("collapse", max_leaves, _mismatch(str(p), ef, fe))
    return _report("collapse", max_leaves, None)
