"""Probability representation of qubit, qutrit and two-qubit states via triangle (Malevich square) areas."""

__version__ = "0.1.0"

from .exceptions import MalevichError
from .qubit import ProbabilityTriple, area_sum, linear_entropy, qubit_from_probabilities
from .qutrit import ComponentQubits, component_qubits, qutrit_area_sum, qutrit_from_probabilities
from .two_qubit import (
    Family,
    TwoQubitDensity,
    area_witness,
    concurrence_closed_form,
    concurrence_wootters,
    negativity,
)

__all__ = [
    "ComponentQubits",
    "Family",
    "MalevichError",
    "ProbabilityTriple",
    "TwoQubitDensity",
    "area_sum",
    "area_witness",
    "component_qubits",
    "concurrence_closed_form",
    "concurrence_wootters",
    "linear_entropy",
    "negativity",
    "qubit_from_probabilities",
    "qutrit_area_sum",
    "qutrit_from_probabilities",
]
