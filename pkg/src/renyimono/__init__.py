"""Rényi-α entanglement measures and Hamming-weight monogamy/polygamy bounds."""

__version__ = "0.1.0"

from .entropy import renyi_entropy, von_neumann_entropy
from .inequalities import (
    BoundParams,
    InequalityReport,
    OrderingDiagnostics,
    bound_monogamy,
    bound_negative_mu,
    bound_polygamy,
    check_monogamy,
    check_polygamy,
    coefficient,
    figure_curves,
    hamming_weight,
    ordering_diagnostics,
    scalar_lemma,
)
from .measures import (
    PartitionSpec,
    RoofResult,
    concurrence,
    concurrence_of_assistance,
    renyi_assistance,
    renyi_entanglement,
    renyi_entanglement_pure,
    renyi_from_concurrence,
)
from .qcore import (
    QuantumState,
    Spectrum,
    StateError,
    SystemLayout,
    ValidationResult,
    eig_hermitian,
    partial_trace,
    tensor,
    to_density,
    validate,
)
from .roof import Decomposition, RoofOptions
from .states import StateSpec, embed_ancilla, make

__all__ = [
    "BoundParams",
    "InequalityReport",
    "OrderingDiagnostics",
    "bound_monogamy",
    "bound_negative_mu",
    "bound_polygamy",
    "check_monogamy",
    "check_polygamy",
    "coefficient",
    "figure_curves",
    "hamming_weight",
    "ordering_diagnostics",
    "scalar_lemma",
    "PartitionSpec",
    "RoofResult",
    "concurrence",
    "concurrence_of_assistance",
    "renyi_assistance",
    "renyi_entanglement",
    "renyi_entanglement_pure",
    "renyi_from_concurrence",
    "QuantumState",
    "Spectrum",
    "StateError",
    "SystemLayout",
    "ValidationResult",
    "eig_hermitian",
    "partial_trace",
    "tensor",
    "to_density",
    "validate",
    "renyi_entropy",
    "von_neumann_entropy",
    "Decomposition",
    "RoofOptions",
    "StateSpec",
    "embed_ancilla",
    "make",
]
