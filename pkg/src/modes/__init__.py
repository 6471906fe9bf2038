from src.modes.residues import (
    ModeOperator,
    check_double_integral,
    check_integration_by_parts,
    check_order1,
    mode,
)

__all__ = [
    "ModeOperator",
    "check_double_integral",
    "check_integration_by_parts",
    "check_order1",
    "mode",
]
