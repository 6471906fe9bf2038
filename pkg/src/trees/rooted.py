"""Rooted trees with labeled leaves: parsing, grafting, collapsing, enumeration.

Trees are unordered; the canonical form sorts children by their smallest
leaf label, so structural equality is tree equality. An internal edge is
named by the set of leaf labels below its lower endpoint.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property


class TreeArityError(ValueError):
    """Grafting was given the wrong number of subtrees."""


class TreeEdgeError(ValueError):
    """The edge is a leaf edge or does not belong to the tree."""


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class RootedTree:
    label: int | None = None
    children: tuple[RootedTree, ...] = ()

    def __post_init__(self) -> None:
        if self.label is not None and self.children:
            raise ValueError("a leaf cannot have children")
        if self.label is None and not self.children:
            raise ValueError("an internal node needs at least one child")
        ordered = tuple(sorted(self.children, key=lambda t: t.min_leaf))
        object.__setattr__(self, "children", ordered)

    # ----- construction -------------------------------------------------

    @classmethod
    def leaf(cls, label: int) -> RootedTree:
        if label < 1:
            raise ValueError(f"leaf labels start at 1, got {label}")
        return cls(label=label)

    @classmethod
    def node(cls, *children: RootedTree) -> RootedTree:
        return cls(children=tuple(children))

    @classmethod
    def corolla(cls, n: int) -> RootedTree:
        if n < 1:
            raise ValueError("a tree needs at least one leaf")
        if n == 1:
            return cls.leaf(1)
        return cls.node(*(cls.leaf(i) for i in range(1, n + 1)))

    # ----- inspection ---------------------------------------------------

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        """Leaf labels in canonical left-to-right order."""
        if self.is_leaf:
            return (self.label,)  # type: ignore[return-value]
        return tuple(x for c in self.children for x in c.leaves)

    @cached_property
    def min_leaf(self) -> int:
        return min(self.leaves)

    @cached_property
    def max_leaf(self) -> int:
        return max(self.leaves)

    @property
    def num_leaves(self) -> int:
        return len(self.leaves)

    @property
    def cluster(self) -> frozenset[int]:
        return frozenset(self.leaves)

    def validate(self) -> RootedTree:
        if sorted(self.leaves) != list(range(1, self.num_leaves + 1)):
            raise ValueError(f"leaf labels must be exactly 1..{self.num_leaves}, got {self.leaves}")
        return self

    def internal_nodes(self) -> Iterator[RootedTree]:
        if self.is_leaf:
            return
        yield self
        for c in self.children:
            yield from c.internal_nodes()

    def internal_edges(self) -> list[frozenset[int]]:
        """Edges joining two internal nodes, named by the lower node's cluster."""
        edges: list[frozenset[int]] = []

        def walk(t: RootedTree) -> None:
            for c in t.children:
                if not c.is_leaf:
                    if c.cluster not in edges:
                        edges.append(c.cluster)
                    walk(c)

        walk(self)
        return sorted(edges, key=lambda e: (sorted(e), len(e)))

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(c.depth() for c in self.children)

    def __str__(self) -> str:
        if self.is_leaf:
            return str(self.label)
        return "(" + ",".join(str(c) for c in self.children) + ")"

    def relabeled(self, offset: int) -> RootedTree:
        if self.is_leaf:
            return RootedTree.leaf(self.label + offset)  # type: ignore[operator]
        return RootedTree.node(*(c.relabeled(offset) for c in self.children))


def leaf(label: int) -> RootedTree:
    return RootedTree.leaf(label)


def corolla(n: int) -> RootedTree:
    return RootedTree.corolla(n)


# ----- text form ---------------------------------------------------------------


def parse_tree(text: str) -> RootedTree:
    """Parse `((1,2),3)`; whitespace is ignored."""
    pos = 0

    def skip() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def parse() -> RootedTree:
        nonlocal pos
        skip()
        if pos >= len(text):
            raise TreeSyntaxError("unexpected end of input", pos)
        if text[pos] == "(":
            pos += 1
            children = [parse()]
            skip()
            while pos < len(text) and text[pos] == ",":
                pos += 1
                children.append(parse())
                skip()
            if pos >= len(text) or text[pos] != ")":
                raise TreeSyntaxError("expected ')'", pos)
            pos += 1
            return RootedTree.node(*children)
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise TreeSyntaxError(f"unexpected character {text[pos]!r}", pos)
        value = int(text[start:pos])
        if value < 1:
            raise TreeSyntaxError("leaf labels start at 1", start)
        return RootedTree.leaf(value)

    tree = parse()
    skip()
    if pos != len(text):
        raise TreeSyntaxError(f"trailing input {text[pos:]!r}", pos)
    try:
        return tree.validate()
    except ValueError as exc:
        raise TreeSyntaxError(str(exc), 0) from exc


# ----- grafting and collapsing ---------------------------------------------------


def graft(p: RootedTree, subtrees: Sequence[RootedTree]) -> RootedTree:
    """Attach subtrees[i] at leaf i + 1 of p, renumbering leaves consecutively."""
    if len(subtrees) != p.num_leaves:
        raise TreeArityError(f"tree has {p.num_leaves} leaves but {len(subtrees)} subtrees were given")
    offsets: dict[int, int] = {}
    running = 0
    for label in range(1, p.num_leaves + 1):
        offsets[label] = running
        running += subtrees[label - 1].num_leaves

    def build(t: RootedTree) -> RootedTree:
        if t.is_leaf:
            return subtrees[t.label - 1].relabeled(offsets[t.label])  # type: ignore[operator]
        return RootedTree.node(*(build(c) for c in t.children))

    return build(p)


def collapse(p: RootedTree, edge: frozenset[int]) -> RootedTree:
    """Contract the internal edge above the node with cluster `edge`.

    With a chain of unary nodes sharing one cluster, the topmost is merged.
    """
    edge = frozenset(edge)
    done = False

    def build(t: RootedTree) -> RootedTree:
        nonlocal done
        if t.is_leaf:
            return t
        children: list[RootedTree] = []
        for c in t.children:
            if not done and not c.is_leaf and c.cluster == edge:
                done = True
                children.extend(c.children)
            else:
                children.append(build(c))
        return RootedTree.node(*children)

    result = build(p)
    if not done:
        raise TreeEdgeError(f"{sorted(edge)} is not an internal edge of {p}")
    return result


def collapse_all(p: RootedTree) -> RootedTree:
    while edges := p.internal_edges():
        p = collapse(p, edges[0])
    return p


# ----- enumeration ---------------------------------------------------------------


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        yield [[first], *partition]
        for k in range(len(partition)):
            yield [*partition[:k], [first, *partition[k]], *partition[k + 1 :]]


def _trees_on(labels: list[int]) -> Iterator[RootedTree]:
    if len(labels) == 1:
        yield RootedTree.leaf(labels[0])
        return
    for partition in _set_partitions(labels):
        if len(partition) < 2:
            continue
        blocks = [sorted(b) for b in partition]
        yield from _combine(blocks)


def _combine(blocks: list[list[int]]) -> Iterator[RootedTree]:
    def rec(k: int, chosen: list[RootedTree]) -> Iterator[RootedTree]:
        if k == len(blocks):
            yield RootedTree.node(*chosen)
            return
        for t in _trees_on(blocks[k]):
            yield from rec(k + 1, [*chosen, t])

    yield from rec(0, [])


def enumerate_trees(n: int) -> list[RootedTree]:
    """All trees on leaves 1..n whose internal nodes have arity >= 2."""
    if n < 1:
        raise ValueError("a tree needs at least one leaf")
    return sorted(set(_trees_on(list(range(1, n + 1)))), key=lambda t: (t.depth(), str(t)))
