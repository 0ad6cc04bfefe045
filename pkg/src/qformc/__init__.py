"""Compile quadratic form expansions of unitaries into measurement patterns and circuits."""

from __future__ import annotations

from qformc.angles import Angle
from qformc.circuit import Circuit, Gate, expand_j_gates
from qformc.clifford import (
    CliffordExpansion,
    LeuvenTableau,
    clifford_pattern,
    clifford_to_qfe,
    interpolate_corrections,
    random_tableau,
    tableau_from_clifford_circuit,
    validate_tableau,
)
from qformc.errors import FormatError, QformcError
from qformc.flows import (
    Flow,
    Geometry,
    GFlow,
    check_gflow,
    find_flow,
    find_fractional_edge_flow,
    find_gflow,
    is_fractional_edge_flow,
)
from qformc.pattern import Correct, Measure, MeasurementPattern, SignalForm
from qformc.qfe import QFE, Normalization, evaluate_dense, induced_geometry, pattern_to_qfe
from qformc.synthesis import (
    circuit_from_flow,
    circuit_to_qfe,
    decompose_about_edge,
    pattern_from_gflow,
    qft_qfe,
    standardize_pattern,
)
from qformc.verify import (
    check_pauli_conjugation,
    proportional_up_to_scalar,
    simulate_circuit_dense,
    simulate_pattern_branches,
)

__all__ = [
    "Angle",
    "Circuit",
    "CliffordExpansion",
    "Correct",
    "Flow",
    "FormatError",
    "GFlow",
    "Gate",
    "Geometry",
    "LeuvenTableau",
    "Measure",
    "MeasurementPattern",
    "Normalization",
    "QFE",
    "QformcError",
    "SignalForm",
    "check_gflow",
    "check_pauli_conjugation",
    "circuit_from_flow",
    "circuit_to_qfe",
    "clifford_pattern",
    "clifford_to_qfe",
    "decompose_about_edge",
    "evaluate_dense",
    "expand_j_gates",
    "find_flow",
    "find_fractional_edge_flow",
    "find_gflow",
    "induced_geometry",
    "interpolate_corrections",
    "is_fractional_edge_flow",
    "pattern_from_gflow",
    "pattern_to_qfe",
    "proportional_up_to_scalar",
    "qft_qfe",
    "random_tableau",
    "simulate_circuit_dense",
    "simulate_pattern_branches",
    "standardize_pattern",
    "tableau_from_clifford_circuit",
    "validate_tableau",
]
