"""Command-line front end and the field-expression language it reads."""

from src.cli.commands import (
    EXIT_FAILED,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USAGE,
    build_parser,
    main,
)
from src.cli.expressions import (
    ExpressionSyntaxError,
    evaluate,
    parse_element,
    parse_expression,
    print_expression,
)

__all__ = [
    "EXIT_FAILED",
    "EXIT_INTERNAL",
    "EXIT_OK",
    "EXIT_USAGE",
    "ExpressionSyntaxError",
    "build_parser",
    "evaluate",
    "main",
    "parse_element",
    "parse_expression",
    "print_expression",
]
