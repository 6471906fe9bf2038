"""Exceptions raised by the singular-function layer."""

from __future__ import annotations


class SpecMismatchError(ValueError):
    """Operands live in different function spaces (dimension, signature,
    allowed singularities or number of points)."""


class WindowError(ValueError):
    """A requested coefficient lies outside the certified exactness window."""


class UnsupportedExpansionError(ValueError):
    """Region expansion was requested where it is not defined (d > 1)."""


class LiteralSyntaxError(ValueError):
    """Singular-function text could not be parsed; `position` is 0-based."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position
