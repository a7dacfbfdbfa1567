"""Self-verification oracle suite for the ideal-limit protocols.

Every reference here is transcribed independently of the simulation
modules: the scattering rule table and waveplate matrix are literal
constants, and the staged reference states are assembled by direct
amplitude placement. The checks therefore catch any sign or wiring
mutation in the simulator proper.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cavity, optics, protocols
from .statevec import (
    LINEAR,
    StateVector,
    direction,
    fidelity,
    polarization,
    spin,
)

PHASE_TOL = 1e-12

# Generic non-degenerate amplitudes used for stage and table checks.
GENERIC_SPIN1 = (0.6, 0.8)
GENERIC_SPIN2 = (0.8, 0.6)

# Ideal-limit scattering rules, one line per input mode and spin:
# (pol_in, dir_in, spin, pol_out, dir_out, sign) with R/up/spin-up = 0.
SCATTER_RULES = (
    (0, 0, 0, 1, 1, +1),
    (1, 0, 0, 1, 0, -1),
    (0, 1, 0, 0, 1, -1),
    (1, 1, 0, 0, 0, +1),
    (0, 0, 1, 0, 0, -1),
    (1, 0, 1, 0, 1, +1),
    (0, 1, 1, 1, 0, +1),
    (1, 1, 1, 1, 1, -1),
)

HWP1_REFERENCE = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _scatter_reference() -> np.ndarray:
    m = np.zeros((8, 8), dtype=complex)
    for p_in, d_in, s, p_out, d_out, sign in SCATTER_RULES:
        m[p_out * 4 + d_out * 2 + s, p_in * 4 + d_in * 2 + s] = sign
    return m


# ---------------------------------------------------------------------------
# Reference states, by direct amplitude placement.

def _phase_subsystems(pol_frame: str = "circular"):
    return (spin(1), spin(2), polarization(1, pol_frame), direction(1))


def _phase_state(entries, pol_frame="circular") -> StateVector:
    """entries: (s1, s2, pol, dir, amplitude) with bit values 0/1."""
    amps = np.zeros(16, dtype=complex)
    for s1, s2, p, d, a in entries:
        amps[s1 * 8 + s2 * 4 + p * 2 + d] += a
    return StateVector(_phase_subsystems(pol_frame), amps)


def eq3_reference(a, b, c, d) -> StateVector:
    entries = []
    for s2, w in ((0, c), (1, d)):
        entries.append((0, s2, 1, 0, -a * w))  # spin up, photon L moving up
        entries.append((1, s2, 0, 1, b * w))   # spin down, photon R moving down
    return _phase_state(entries)


def eq4_reference(a, b, c, d) -> StateVector:
    k = 1.0 / np.sqrt(2.0)
    entries = []
    for s2, w in ((0, c), (1, d)):
        entries += [
            (0, s2, 0, 1, -a * w * k),
            (0, s2, 1, 1, a * w * k),
            (1, s2, 0, 1, b * w * k),
            (1, s2, 1, 1, b * w * k),
        ]
    return _phase_state(entries)


def eq5_reference(a, b, c, d) -> StateVector:
    k = 1.0 / np.sqrt(2.0)
    entries = []
    for s2, w in ((0, c), (1, d)):
        entries += [(0, s2, 0, 1, a * w * k), (0, s2, 1, 0, -a * w * k)]
    for s2, w in ((0, -b * c), (1, b * d)):
        entries += [(1, s2, 0, 1, w * k), (1, s2, 1, 0, w * k)]
    return _phase_state(entries)


def eq6_reference(a, b, c, d) -> StateVector:
    k = 1.0 / np.sqrt(2.0)
    entries = [
        (0, 0, 0, 0, a * c * k),
        (0, 1, 0, 0, a * d * k),
        (1, 0, 0, 0, -b * c * k),
        (1, 1, 0, 0, b * d * k),
        (0, 0, 1, 0, -a * c * k),
        (0, 1, 1, 0, -a * d * k),
        (1, 0, 1, 0, -b * c * k),
        (1, 1, 1, 0, b * d * k),
    ]
    return _phase_state(entries, pol_frame=LINEAR)


def phase_gate_table_rows(a, b, c, d) -> dict[str, np.ndarray]:
    """Heralded (pre-correction) two-spin states per detector outcome."""
    return {
        "H": np.array([a * c, a * d, -b * c, b * d], dtype=complex),
        "V": np.array([a * c, a * d, b * c, -b * d], dtype=complex),
    }


def _cnot_subsystems(pol_frame: str = "circular"):
    return (
        spin(1),
        spin(2),
        polarization(1, pol_frame),
        polarization(2, pol_frame),
        direction(1),
        direction(2),
    )


def _cnot_state(spin_part, photon_part, pol_frame="circular") -> StateVector:
    return StateVector(_cnot_subsystems(pol_frame), np.kron(spin_part, photon_part))


def _photon_pair(entries) -> np.ndarray:
    """entries: (p1, p2, d1, d2, amplitude) over both photons."""
    v = np.zeros(16, dtype=complex)
    for p1, p2, d1, d2, a in entries:
        v[p1 * 8 + p2 * 4 + d1 * 2 + d2] += a
    return v


def eq8_reference(alpha, beta, gamma, delta) -> StateVector:
    spins = np.kron([alpha, beta], [gamma + delta, gamma - delta])
    photons = _photon_pair(
        [(0, 0, 0, 0, 1.0), (0, 1, 0, 0, 1.0), (1, 0, 0, 0, 1.0), (1, 1, 0, 0, -1.0)]
    )
    return _cnot_state(spins / (2.0 * np.sqrt(2.0)), photons)


def eq9_reference(alpha, beta, gamma, delta) -> StateVector:
    s2_minus = np.array([gamma + delta, delta - gamma])
    s2_plus = np.array([gamma + delta, gamma - delta])
    rd, lu = (0, 1), (1, 0)  # (pol, dir) bit pairs for R-down and L-up

    def photon(p1_mode, p2_sign):
        p1p, p1d = p1_mode
        return _photon_pair(
            [
                (p1p, rd[0], p1d, rd[1], 1.0),
                (p1p, lu[0], p1d, lu[1], p2_sign),
            ]
        )

    amps = np.zeros(64, dtype=complex)
    lines = (
        (alpha, [1, 0], s2_minus, rd, +1),
        (alpha, [1, 0], s2_plus, lu, -1),
        (-beta, [0, 1], s2_minus, lu, +1),
        (-beta, [0, 1], s2_plus, rd, -1),
    )
    for coef, s1, s2, p1_mode, p2_sign in lines:
        amps += coef * np.kron(np.kron(s1, s2), photon(p1_mode, p2_sign))
    return StateVector(_cnot_subsystems(), amps / (2.0 * np.sqrt(2.0)))


def cnot_table_rows(alpha, beta, gamma, delta) -> dict[str, np.ndarray]:
    """Heralded (pre-correction) two-spin states per detector pattern."""
    return {
        "HH": np.array(
            [alpha * delta, alpha * gamma, -beta * gamma, -beta * delta], dtype=complex
        ),
        "HV": np.array(
            [alpha * delta, alpha * gamma, beta * gamma, beta * delta], dtype=complex
        ),
        "VH": np.array(
            [alpha * gamma, alpha * delta, -beta * delta, -beta * gamma], dtype=complex
        ),
        "VV": np.array(
            [alpha * gamma, alpha * delta, beta * delta, beta * gamma], dtype=complex
        ),
    }


def eq10_reference(alpha, beta, gamma, delta) -> StateVector:
    rows = cnot_table_rows(alpha, beta, gamma, delta)
    signs = {"HH": 1.0, "HV": 1.0, "VH": 1.0, "VV": -1.0}
    bits = {"H": 0, "V": 1}
    amps = np.zeros(64, dtype=complex)
    for pattern, row in rows.items():
        photons = _photon_pair([(bits[pattern[0]], bits[pattern[1]], 0, 0, 1.0)])
        amps += signs[pattern] * 0.5 * np.kron(row, photons)
    return StateVector(_cnot_subsystems(LINEAR), amps)


# ---------------------------------------------------------------------------
# Checks.

def _phase_distance(state: StateVector, reference: StateVector) -> float:
    return 1.0 - fidelity(state, reference)


def _vector_phase_distance(v: np.ndarray, w: np.ndarray) -> float:
    nv, nw = np.linalg.norm(v), np.linalg.norm(w)
    return 1.0 - (abs(np.vdot(v, w)) / (nv * nw)) ** 2


def _check(name: str, deviation: float, tol: float) -> CheckResult:
    return CheckResult(name, bool(deviation <= tol), f"deviation {deviation:.3e}")


def _element_checks() -> list[CheckResult]:
    ds = float(np.max(np.abs(cavity.scatter_operator(cavity.IDEAL).matrix - _scatter_reference())))
    dh = float(np.max(np.abs(optics.hwp1().matrix - HWP1_REFERENCE)))
    return [
        _check("scattering rules (ideal limit)", ds, PHASE_TOL),
        _check("input-mixing waveplate action", dh, PHASE_TOL),
    ]


def _gate_checks(protocol: str) -> list[CheckResult]:
    target = protocols.gate_matrix(protocol)
    label = "diag(1,1,1,-1)" if protocol == protocols.PHASE_GATE else "CNOT permutation"
    results = []
    for pattern in protocols.corrections_table(protocol):
        got = protocols.extract_gate_matrix(protocol, pattern)
        dist = float(np.linalg.norm(got - target))
        results.append(_check(f"{protocol}[{pattern}] gate == {label}", dist, PHASE_TOL))
    return results


def _run_generic(protocol: str):
    return protocols.run_protocol(protocol, GENERIC_SPIN1, GENERIC_SPIN2)


def _probability_checks(protocol: str) -> list[CheckResult]:
    outcomes, _, efficiency = _run_generic(protocol)
    expected = 0.5 if protocol == protocols.PHASE_GATE else 0.25
    dev = max(abs(o.raw_probability - expected) for o in outcomes)
    dev = max(dev, abs(sum(o.raw_probability for o in outcomes) - 1.0))
    return [
        _check(f"{protocol} outcome probabilities == {expected}", dev, PHASE_TOL),
        _check(f"{protocol} efficiency == 1", abs(efficiency - 1.0), PHASE_TOL),
    ]


def _stage_checks(protocol: str) -> list[CheckResult]:
    _, trace, _ = _run_generic(protocol)
    if protocol == protocols.PHASE_GATE:
        a, b = GENERIC_SPIN1
        c, d = GENERIC_SPIN2
        refs = {
            "Eq3": eq3_reference(a, b, c, d),
            "Eq4": eq4_reference(a, b, c, d),
            "Eq5": eq5_reference(a, b, c, d),
            "Eq6": eq6_reference(a, b, c, d),
        }
    else:
        al, be = GENERIC_SPIN1
        ga, de = GENERIC_SPIN2
        refs = {
            "Eq8": eq8_reference(al, be, ga, de),
            "Eq9": eq9_reference(al, be, ga, de),
            "Eq10": eq10_reference(al, be, ga, de),
        }
    return [
        _check(
            f"{protocol} stage {lab} matches reference",
            _phase_distance(trace.state(lab), ref),
            PHASE_TOL,
        )
        for lab, ref in refs.items()
    ]


def _heralded_row_checks(protocol: str) -> list[CheckResult]:
    outcomes, _, _ = _run_generic(protocol)
    if protocol == protocols.PHASE_GATE:
        rows = phase_gate_table_rows(*GENERIC_SPIN1, *GENERIC_SPIN2)
    else:
        rows = cnot_table_rows(*GENERIC_SPIN1, *GENERIC_SPIN2)
    return [
        _check(
            f"{protocol}[{o.pattern}] heralded spin state matches table row",
            _vector_phase_distance(o.projected_state.amplitudes, rows[o.pattern]),
            PHASE_TOL,
        )
        for o in outcomes
    ]


def run_checks(protocol: str = "all") -> list[CheckResult]:
    """All ideal-limit oracle checks for one protocol or both."""
    if protocol == "all":
        selected = list(protocols.PROTOCOLS)
    elif protocol in protocols.PROTOCOLS:
        selected = [protocol]
    else:
        raise ValueError(f"unknown protocol {protocol!r}")
    results = _element_checks()
    for p in selected:
        results += _gate_checks(p)
        results += _probability_checks(p)
        results += _stage_checks(p)
        results += _heralded_row_checks(p)
    return results
