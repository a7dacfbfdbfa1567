"""Heralded photon-mediated two-spin gates in dot-cavity units."""

from .analysis import SweepRecord, average_fidelity, sweep
from .cavity import (
    IDEAL,
    CavityParams,
    ScatterCoefficients,
    coefficients,
    cold_coefficients,
    hot_coefficients,
    scatter_operator,
    sz_of_mode,
)
from .optics import hwp1, hwp2, route, spin_hadamard, spin_pauli
from .protocols import (
    CNOT,
    PHASE_GATE,
    ProtocolOutcome,
    ProtocolResult,
    StageTrace,
    extract_gate_matrix,
    feed_forward,
    run_cnot_teleportation,
    run_phase_gate,
    run_protocol,
)
from .statevec import (
    Operator,
    StateVector,
    SubsystemLabel,
    apply_operator,
    direction,
    fidelity,
    haar_random_spin,
    make_product_state,
    measure_polarization,
    polarization,
    spin,
)

__all__ = [
    "IDEAL",
    "CNOT",
    "PHASE_GATE",
    "CavityParams",
    "Operator",
    "ProtocolOutcome",
    "ProtocolResult",
    "ScatterCoefficients",
    "StageTrace",
    "StateVector",
    "SubsystemLabel",
    "SweepRecord",
    "apply_operator",
    "average_fidelity",
    "coefficients",
    "cold_coefficients",
    "direction",
    "extract_gate_matrix",
    "feed_forward",
    "fidelity",
    "haar_random_spin",
    "hot_coefficients",
    "hwp1",
    "hwp2",
    "make_product_state",
    "measure_polarization",
    "polarization",
    "route",
    "run_cnot_teleportation",
    "run_phase_gate",
    "run_protocol",
    "scatter_operator",
    "spin",
    "spin_hadamard",
    "spin_pauli",
    "sweep",
    "sz_of_mode",
]

__version__ = "0.1.0"
