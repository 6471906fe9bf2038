"""Singular function rings K_m, region expansions and residues."""

from src.singfun.errors import (
    LiteralSyntaxError,
    SpecMismatchError,
    UnsupportedExpansionError,
    WindowError,
)
from src.singfun.functions import SingularFunction, sf_arith, sf_diff, to_qq
from src.singfun.laurent import LaurentSeries, RegionOrder, expand, residue
from src.singfun.parsing import parse_function
from src.singfun.render import render_function, render_polynomial
from src.singfun.spaces import (
    Factor,
    FactorKind,
    FunctionSpace,
    SingularitySpec,
    SpacetimeSpec,
)

__all__ = [
    "Factor",
    "FactorKind",
    "FunctionSpace",
    "LaurentSeries",
    "LiteralSyntaxError",
    "RegionOrder",
    "SingularFunction",
    "SingularitySpec",
    "SpacetimeSpec",
    "SpecMismatchError",
    "UnsupportedExpansionError",
    "WindowError",
    "expand",
    "parse_function",
    "render_function",
    "render_polynomial",
    "residue",
    "sf_arith",
    "sf_diff",
    "to_qq",
]
