"""Stabilizer notation for the toy theory and the qubit stabilizer formalism."""

from .algebra import (
    QUBIT,
    TOY,
    CheckVector,
    DimensionMismatch,
    ObservableSyntaxError,
    PauliObservable,
    ToyObservable,
    commutes,
    eigenvalue,
    format_ontic,
    m_map,
    multiply,
    parse_observable,
    pauli,
    toy,
)
from .stabilizer import (
    InvalidGenerators,
    Membership,
    StabilizerState,
    are_disjoint,
    expand,
    is_pure,
    is_rephasing,
    membership,
    mix,
    new_state,
    state,
    superpositions,
    tensor,
)
from .transform import (
    ElementaryPermutation,
    InvalidTransformation,
    Transformation,
    apply,
    apply_to_observable,
    compose,
    from_permutation,
    gate,
    invert,
    ontic_permutation,
    transformation,
)

__version__ = "0.1.0"

__all__ = [
    "QUBIT",
    "TOY",
    "CheckVector",
    "DimensionMismatch",
    "ObservableSyntaxError",
    "PauliObservable",
    "ToyObservable",
    "commutes",
    "eigenvalue",
    "format_ontic",
    "m_map",
    "multiply",
    "parse_observable",
    "pauli",
    "toy",
    "InvalidGenerators",
    "Membership",
    "StabilizerState",
    "are_disjoint",
    "expand",
    "is_pure",
    "is_rephasing",
    "membership",
    "mix",
    "new_state",
    "state",
    "superpositions",
    "tensor",
    "ElementaryPermutation",
    "InvalidTransformation",
    "Transformation",
    "apply",
    "apply_to_observable",
    "compose",
    "from_permutation",
    "gate",
    "invert",
    "ontic_permutation",
    "transformation",
]
