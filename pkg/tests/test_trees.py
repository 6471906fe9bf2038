from __future__ import annotations

import pytest

from src.trees import (
    RootedTree,
    TreeArityError,
    TreeEdgeError,
    TreeSyntaxError,
    check_collapse_laws,
    check_graft_associativity,
    collapse,
    collapse_all,
    corolla,
    enumerate_trees,
    graft,
    leaf,
    parse_tree,
    shape_coherence,
    shape_of,
)
from src.singfun import UnsupportedExpansionError
from tests.conftest import one, phi

CATERPILLAR = "((1,2),3)"


def test_parse_and_print_round_trip():
    for text in ["1", "(1,2)", CATERPILLAR, "(1,(2,3))", "((1,3),2)", "((1,2),(3,4))"]:
        assert str(parse_tree(text)) == text


def test_children_are_sorted_by_smallest_leaf():
    assert str(parse_tree("(3,(2,1))")) == "((1,2),3)"
    assert parse_tree("(2, 1)") == parse_tree("(1,2)")


@pytest.mark.parametrize("text,position", [("(1,2", 4), ("(1,,2)", 3), ("(1,2)x", 5)])
def test_syntax_errors_report_position(text, position):
    with pytest.raises(TreeSyntaxError) as err:
        parse_tree(text)
    assert err.value.position == position


def test_labels_must_be_one_to_n():
    with pytest.raises(TreeSyntaxError):
        parse_tree("(1,3)")


def test_graft_builds_caterpillar():
    assert graft(corolla(2), [corolla(2), leaf(1)]) == parse_tree(CATERPILLAR)


def test_graft_units():
    p = parse_tree("((1,2),(3,4))")
    assert graft(p, [leaf(1)] * 4) == p
    assert graft(leaf(1), [p]) == p


def test_graft_renumbers_in_leaf_order():
    assert graft(parse_tree("(1,2)"), [leaf(1), corolla(2)]) == parse_tree("(1,(2,3))")


def test_graft_arity_mismatch():
    with pytest.raises(TreeArityError):
        graft(corolla(2), [leaf(1)])


def test_collapse_single_edge():
    p = parse_tree(CATERPILLAR)
    assert p.internal_edges() == [frozenset({1, 2})]
    assert collapse(p, frozenset({1, 2})) == corolla(3)


def test_collapse_rejects_leaf_edges():
    with pytest.raises(TreeEdgeError):
        collapse(parse_tree(CATERPILLAR), frozenset({3}))


def test_collapse_all_reaches_corolla():
    for p in enumerate_trees(4):
        assert collapse_all(p) == corolla(4)


def test_unary_chain_collapses_one_node_at_a_time():
    chain = RootedTree.node(RootedTree.node(leaf(1), leaf(2)))
    assert collapse(chain, frozenset({1, 2})) == corolla(2)


def test_tree_counts():
    assert [len(enumerate_trees(n)) for n in range(1, 6)] == [1, 1, 4, 26, 236]


def test_grafting_is_associative():
    assert check_graft_associativity(4).holds


@pytest.mark.slow
def test_grafting_is_associative_on_every_tree_up_to_five_leaves():
    report = check_graft_associativity()
    assert report.holds, report.render()
    assert report.axiom == "graft-associativity[n<=5]"


def test_collapse_laws():
    assert check_collapse_laws(5).holds


def test_shapes():
    assert shape_of(leaf(1)).describe() == "trivial"
    assert shape_of(corolla(3)).is_rational
    caterpillar = shape_of(parse_tree(CATERPILLAR))
    assert not caterpillar.is_rational
    assert caterpillar.describe() == "|u2| >> |u1|; u1=x1-x2, u2=x2"
    assert caterpillar.position(1) == {0: 1, 1: 1}


@pytest.mark.parametrize("tree", ["(1,2,3)", CATERPILLAR, "(1,(2,3))", "((1,3),2)"])
@pytest.mark.parametrize("a,b,c", [(phi(), phi(), one()), (phi(), phi() ** 2, phi())])
def test_shape_coherence(line_algebra, tree, a, b, c):
    report = shape_coherence(line_algebra, parse_tree(tree), a, b, c, 4)
    assert report.holds, report.render()
    assert report.axiom == f"shape{tree}"


def test_shape_coherence_needs_three_leaves(line_algebra):
    with pytest.raises(ValueError):
        shape_coherence(line_algebra, corolla(2), phi(), phi(), one(), 4)


def test_shape_coherence_needs_a_line(plane_algebra):
    with pytest.raises(UnsupportedExpansionError):
        shape_coherence(plane_algebra, parse_tree(CATERPILLAR), phi(2), phi(2), one(2), 4)
