from src.fieldring.states import StateSeries
from src.freefield.algebra import (
    FreeFieldAlgebra,
    Propagator,
    PropagatorError,
    standard_propagator,
)
from src.freefield.correlators import correlator, perfect_matchings, wick_oracle
from src.freefield.expansion import LaurentState, Placement, expand_state, state_from_elements

__all__ = [
    "FreeFieldAlgebra",
    "LaurentState",
    "Placement",
    "Propagator",
    "PropagatorError",
    "StateSeries",
    "correlator",
    "expand_state",
    "perfect_matchings",
    "standard_propagator",
    "state_from_elements",
    "wick_oracle",
]
