"""Passive optical elements and single-spin rotations.

Two half-wave plates appear in the protocols. The input-mixing plate
(``hwp1``) acts in the circular basis and is a Hadamard on R/L. The
output plate (``hwp2``) converts between circular and linear labels
(R <-> H, L <-> V) without touching amplitudes.

Circular-basis polarizing beam splitters are modeled as ``route``:
polarization-conditioned reassignment of the propagation direction.
At every protocol stage each polarization occupies a single known port,
so the four-port interferometric detail is never needed.
"""

from __future__ import annotations

import numpy as np

from .statevec import (
    CIRCULAR,
    DIRECTION,
    LINEAR,
    POLARIZATION,
    Operator,
    StateVector,
    apply_operator,
)

UP = "up"
DOWN = "down"
_DIR_BIT = {UP: 0, DOWN: 1}

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

# Columns: R -> (R + L)/sqrt(2), L -> (R - L)/sqrt(2).
_HWP1 = np.array([[1.0, 1.0], [1.0, -1.0]]) * _INV_SQRT2

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) * _INV_SQRT2
_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}


def hwp1() -> Operator:
    """R/L-mixing half-wave plate, circular frame only."""
    return Operator(_HWP1, requires_frame=CIRCULAR)


def hwp2(state: StateVector, photon: int) -> StateVector:
    """Toggle a photon between the circular and linear polarization labels.

    Amplitudes are untouched: R maps to H and L to V (and back), which is
    an identity on the fixed index convention. Applying twice restores the
    original frame.
    """
    pol = state.find(POLARIZATION, photon)
    flipped = CIRCULAR if pol.frame == LINEAR else LINEAR
    return state.relabel(pol, type(pol)(POLARIZATION, photon, flipped))


def route(
    state: StateVector, photon: int, dir_for_R: str, dir_for_L: str
) -> StateVector:
    """Circular-basis PBS: send R to one port and L to another.

    Amplitudes of equal polarization arriving from different directions are
    summed coherently onto the assigned output direction.
    """
    pol = state.find(POLARIZATION, photon)
    if pol.frame != CIRCULAR:
        raise ValueError("routing acts in the circular frame")
    dirlab = state.find(DIRECTION, photon)
    m = np.zeros((4, 4))
    for pol_bit, out_dir in ((0, dir_for_R), (1, dir_for_L)):
        out = 2 * pol_bit + _DIR_BIT[out_dir]
        for in_dir in (0, 1):
            m[out, 2 * pol_bit + in_dir] = 1.0
    return apply_operator(state, Operator(m).on(pol, dirlab))


def spin_hadamard() -> Operator:
    return Operator(_HADAMARD)


def spin_pauli(which: str) -> Operator:
    if which not in _PAULI:
        raise ValueError(f"unknown Pauli axis {which!r}")
    return Operator(_PAULI[which])
