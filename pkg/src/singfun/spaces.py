"""Spacetimes, allowed singularities, and the coordinate rings K_m live on.

A `FunctionSpace` fixes everything two singular functions must share to be
added or multiplied: the spacetime (dimension and metric signs), the set of
allowed denominator factors, and the number of points. Its polynomial ring
has one generator per coordinate, ordered point-major, so lifting to more
points only pads exponent tuples with zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing

from src.singfun.errors import SpecMismatchError


@dataclass(frozen=True)
class SpacetimeSpec:
    """Coordinates x_0..x_{d-1} per point and the quadratic form q."""

    dim: int = 1
    metric_signs: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"spacetime dimension must be >= 1, got {self.dim}")
        if not self.metric_signs:
            object.__setattr__(self, "metric_signs", (1,) + (-1,) * (self.dim - 1))
        signs = tuple(int(s) for s in self.metric_signs)
        if len(signs) != self.dim:
            raise ValueError(
                f"metric_signs has {len(signs)} entries, expected {self.dim}"
            )
        if any(s not in (1, -1) for s in signs):
            raise ValueError(f"metric signs must be +1 or -1, got {signs}")
        object.__setattr__(self, "metric_signs", signs)

    @classmethod
    def from_signature(cls, signature: str) -> SpacetimeSpec:
        """Build from a string such as `+-` or `+---`."""
        signs = []
        for ch in signature.strip():
            if ch == "+":
                signs.append(1)
            elif ch == "-":
                signs.append(-1)
            else:
                raise ValueError(f"invalid signature character {ch!r} in {signature!r}")
        return cls(dim=len(signs), metric_signs=tuple(signs))

    @property
    def signature(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.metric_signs)


class FactorKind(StrEnum):
    POINT = "point"
    PAIR = "pair"


@dataclass(frozen=True, order=True)
class Factor:
    """An instantiated denominator generator.

    POINT factors are x_i (d = 1) or q(x_i) (d > 1); PAIR factors, always
    stored with i < j, are x_i - x_j (d = 1) or q(x_i - x_j) (d > 1).
    """

    kind: FactorKind
    points: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind is FactorKind.POINT and len(self.points) != 1:
            raise ValueError(f"point factor needs one point, got {self.points}")
        if self.kind is FactorKind.PAIR:
            if len(self.points) != 2 or not self.points[0] < self.points[1]:
                raise ValueError(f"pair factor needs i < j, got {self.points}")

    @classmethod
    def point(cls, i: int) -> Factor:
        return cls(FactorKind.POINT, (i,))

    @classmethod
    def pair(cls, i: int, j: int) -> tuple[Factor, int]:
        """Oriented pair factor for x_i - x_j: returns (factor, orientation sign)."""
        if i == j:
            raise ValueError("pair factor needs two distinct points")
        if i < j:
            return cls(FactorKind.PAIR, (i, j)), 1
        return cls(FactorKind.PAIR, (j, i)), -1

    @property
    def max_point(self) -> int:
        return max(self.points)


@dataclass(frozen=True)
class SingularitySpec:
    """Which factor families may appear in denominators."""

    point_factors: bool = True
    pair_factors: bool = True

    def allows(self, factor: Factor) -> bool:
        if factor.kind is FactorKind.POINT:
            return self.point_factors
        return self.pair_factors


@lru_cache(maxsize=None)
def coordinate_names(num_points: int, dim: int) -> tuple[str, ...]:
    if dim == 1:
        return tuple(f"x{i + 1}" for i in range(num_points))
    return tuple(f"x{i + 1}_{u}" for i in range(num_points) for u in range(dim))


@lru_cache(maxsize=None)
def coordinate_ring(num_points: int, dim: int) -> PolyRing:
    # Zero-point spaces (constants) reuse the one-point ring.
    return PolyRing(coordinate_names(max(num_points, 1), dim), QQ)


@dataclass(frozen=True)
class FunctionSpace:
    """K_m: functions of `num_points` points with the allowed singularities."""

    spacetime: SpacetimeSpec = field(default_factory=SpacetimeSpec)
    singularities: SingularitySpec = field(default_factory=SingularitySpec)
    num_points: int = 1

    def __post_init__(self) -> None:
        if self.num_points < 0:
            raise ValueError(f"num_points must be >= 0, got {self.num_points}")

    @property
    def dim(self) -> int:
        return self.spacetime.dim

    @property
    def ring(self) -> PolyRing:
        return coordinate_ring(self.num_points, self.dim)

    @property
    def names(self) -> tuple[str, ...]:
        return coordinate_names(max(self.num_points, 1), self.dim)

    def with_points(self, num_points: int) -> FunctionSpace:
        if num_points == self.num_points:
            return self
        return FunctionSpace(self.spacetime, self.singularities, num_points)

    def same_family(self, other: FunctionSpace) -> bool:
        return self.spacetime == other.spacetime and self.singularities == other.singularities

    def require_same(self, other: FunctionSpace) -> None:
        if self != other:
            raise SpecMismatchError(f"function spaces differ: {self} vs {other}")

    def index(self, point: int, coord: int) -> int:
        if not 0 <= point < self.num_points:
            raise IndexError(f"point {point} out of range for {self.num_points} points")
        if not 0 <= coord < self.dim:
            raise IndexError(f"coordinate {coord} out of range for dimension {self.dim}")
        return point * self.dim + coord

    def coord(self, point: int, coord: int) -> PolyElement:
        return self.ring.gens[self.index(point, coord)]

    def factor_poly(self, factor: Factor) -> PolyElement:
        return _factor_poly(self, factor)

    def check_factor(self, factor: Factor) -> None:
        if factor.max_point >= self.num_points:
            raise SpecMismatchError(f"{factor} refers to a point outside {self.num_points} points")
        if not self.singularities.allows(factor):
            raise SpecMismatchError(f"{factor.kind} factors are not allowed by {self.singularities}")

    def quadratic_form(self, point: int, other: int | None = None) -> PolyElement:
        """q(x_point) or q(x_point - x_other)."""
        total = self.ring.zero
        for u, sign in enumerate(self.spacetime.metric_signs):
            v = self.coord(point, u)
            if other is not None:
                v = v - self.coord(other, u)
            total += sign * v**2
        return total

    def lift(self, poly: PolyElement, target: FunctionSpace) -> PolyElement:
        """Re-express a polynomial of this space in a space with at least as many points."""
        if target.ring is self.ring:
            return poly
        if target.ring.ngens < self.ring.ngens:
            raise SpecMismatchError("cannot lift into a space with fewer points")
        pad = (0,) * (target.ring.ngens - self.ring.ngens)
        return target.ring.from_dict({m + pad: c for m, c in poly.items()})


@lru_cache(maxsize=None)
def _factor_poly(space: FunctionSpace, factor: Factor) -> PolyElement:
    space.check_factor(factor)
    if space.dim == 1:
        if factor.kind is FactorKind.POINT:
            return space.coord(factor.points[0], 0)
        i, j = factor.points
        return space.coord(i, 0) - space.coord(j, 0)
    if factor.kind is FactorKind.POINT:
        return space.quadratic_form(factor.points[0])
    i, j = factor.points
    return space.quadratic_form(i, j)
