from src.trees.rooted import (
    RootedTree,
    TreeArityError,
    TreeEdgeError,
    TreeSyntaxError,
    collapse,
    collapse_all,
    corolla,
    enumerate_trees,
    graft,
    leaf,
    parse_tree,
)
from src.trees.laws import check_collapse_laws, check_graft_associativity
from src.trees.shapes import ExpansionShape, shape_coherence, shape_of

__all__ = [
    "ExpansionShape",
    "RootedTree",
    "TreeArityError",
    "TreeEdgeError",
    "TreeSyntaxError",
    "check_collapse_laws",
    "check_graft_associativity",
    "collapse",
    "collapse_all",
    "corolla",
    "enumerate_trees",
    "graft",
    "leaf",
    "parse_tree",
    "shape_coherence",
    "shape_of",
]
