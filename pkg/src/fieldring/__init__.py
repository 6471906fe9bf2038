from src.fieldring.holomorphic import (
    HolomorphicVertexAlgebra,
    RecoveredRing,
    holo_vertex,
    recover_ring,
    symbolic_translate,
    translate,
    vacuum_expectation,
)
from src.fieldring.monomials import (
    UNIT,
    Derivation,
    FieldElement,
    FieldMonomial,
    Generator,
    apply_D,
    apply_D_power,
    basis_elements,
    graded_basis,
    random_field_element,
)
from src.fieldring.states import StateSeries

__all__ = [
    "UNIT",
    "Derivation",
    "FieldElement",
    "FieldMonomial",
    "Generator",
    "HolomorphicVertexAlgebra",
    "RecoveredRing",
    "StateSeries",
    "apply_D",
    "apply_D_power",
    "basis_elements",
    "graded_basis",
    "holo_vertex",
    "random_field_element",
    "recover_ring",
    "symbolic_translate",
    "translate",
    "vacuum_expectation",
]
