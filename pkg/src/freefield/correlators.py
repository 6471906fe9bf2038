"""Correlators Tr(phi(x_1) ... phi(x_k)) and a brute-force Wick oracle."""

from __future__ import annotations

from collections.abc import Iterator

from src.freefield.algebra import FreeFieldAlgebra
from src.singfun.functions import SingularFunction


def correlator(algebra: FreeFieldAlgebra, k: int, cutoff: int | None = None) -> SingularFunction:
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return algebra.product_at_points(k, cutoff).vev()


def perfect_matchings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    if len(points) % 2:
        return
    first, rest = points[0], points[1:]
    for idx, partner in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1 :]
        for matching in perfect_matchings(remaining):
            yield [(first, partner), *matching]


def wick_oracle(algebra: FreeFieldAlgebra, k: int) -> SingularFunction:
    """Sum over perfect matchings M of prod_{(i,j) in M} Delta(x_i - x_j)."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    space = algebra.space(k)
    total = SingularFunction.zero(space)
    for matching in perfect_matchings(list(range(k))):
        term = SingularFunction.one(space)
        for i, j in matching:
            term = term * algebra.delta.transport(space, {0: (i, j)})
        total = total + term
    return total
