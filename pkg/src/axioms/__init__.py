from src.axioms.checks import (
    check_associativity,
    check_bilinear_invariance,
    check_commutativity,
    check_commutator_relation,
    check_identity,
    check_skew,
    check_translation_covariance,
)

__all__ = [
    "check_associativity",
    "check_bilinear_invariance",
    "check_commutativity",
    "check_commutator_relation",
    "check_identity",
    "check_skew",
    "check_translation_covariance",
]
