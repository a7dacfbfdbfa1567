"""Quantum-dot-microcavity scattering unit.

A double-sided cavity with a singly charged dot reflects or transmits an
incident photon depending on whether the photon's spin angular momentum
matches the electron spin. The matched (hot) response carries amplitudes
(r, t), the unmatched (cold) response (r0, t0). In the ideal limit the
hot cavity reflects perfectly (r = 1) and the cold cavity transmits with
a sign flip (t0 = -1), which realizes a spin-controlled polarization and
direction flip on the photon.

All rates are expressed in units of the cavity field decay rate kappa.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevec import CIRCULAR, Operator

_COEFF_TOL = 1e-9
_DENOM_FLOOR = 1e-15


@dataclass(frozen=True)
class CavityParams:
    """Physical rates and detunings, all normalized to kappa.

    ``omega_minus_omega0`` is the probe detuning of the incoming photon
    from the common resonance; the cavity-mode and dipole detunings
    default to zero (resonant interaction).
    """

    g: float
    kappa: float = 1.0
    kappa_s: float = 0.0
    gamma: float = 0.0
    omega_minus_omega0: float = 0.0
    omega_c_minus_omega0: float = 0.0
    omega_x_minus_omega0: float = 0.0

    def __post_init__(self) -> None:
        if self.g < 0 or self.kappa_s < 0 or self.gamma < 0:
            raise ValueError("rates g, kappa_s, gamma must be non-negative")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")


@dataclass(frozen=True)
class ScatterCoefficients:
    """Hot (r, t) and cold (r0, t0) response amplitudes of one cavity."""

    r: complex
    t: complex
    r0: complex
    t0: complex

    def __post_init__(self) -> None:
        if abs(self.r) ** 2 + abs(self.t) ** 2 > 1.0 + _COEFF_TOL:
            raise ValueError("hot response exceeds unit probability")
        if abs(self.r0) ** 2 + abs(self.t0) ** 2 > 1.0 + _COEFF_TOL:
            raise ValueError("cold response exceeds unit probability")


IDEAL = ScatterCoefficients(1.0 + 0j, 0j, 0j, -1.0 + 0j)


def hot_coefficients(p: CavityParams) -> tuple[complex, complex]:
    """Reflection and transmission of the cavity with the dot coupled."""
    dx = p.omega_x_minus_omega0 - p.omega_minus_omega0
    dc = p.omega_c_minus_omega0 - p.omega_minus_omega0
    a = 1j * dx + p.gamma / 2.0
    b = 1j * dc + p.kappa_s / 2.0
    den = a * (b + p.kappa) + p.g**2
    if abs(den) < _DENOM_FLOOR:
        raise ValueError("singular response: non-physical parameter combination")
    r = (a * b + p.g**2) / den
    t = -p.kappa * a / den
    return r, t


def cold_coefficients(p: CavityParams) -> tuple[complex, complex]:
    """Reflection and transmission with the dot uncoupled (empty cavity)."""
    b = -1j * p.omega_minus_omega0 + p.kappa_s / 2.0
    den = b + p.kappa
    if abs(den) < _DENOM_FLOOR:
        raise ValueError("singular response: non-physical parameter combination")
    return b / den, -p.kappa / den


def coefficients(p: CavityParams) -> ScatterCoefficients:
    r, t = hot_coefficients(p)
    r0, t0 = cold_coefficients(p)
    return ScatterCoefficients(r, t, r0, t0)


def sz_of_mode(pol: str, dir: str) -> int:
    """Spin angular momentum (+1 or -1) of a circular photon mode."""
    if pol not in ("R", "L") or dir not in ("up", "down"):
        raise ValueError(f"unknown photon mode ({pol}, {dir})")
    return 1 if (pol == "R") == (dir == "up") else -1


def scatter_operator(coeffs: ScatterCoefficients = IDEAL) -> Operator:
    """Photon-spin scattering map on (polarization, direction, spin).

    A spin-up electron couples the modes with spin angular momentum +1,
    a spin-down electron those with -1. The coupled (hot) channel sends
    a mode to r times its joint polarization-and-direction flip plus t
    times itself; the uncoupled (cold) channel does the same with
    (r0, t0). The joint flip preserves the photon's angular momentum, so
    amplitude never crosses between the two mode pairs.
    """
    m = np.zeros((8, 8), dtype=complex)
    for pol_bit in (0, 1):
        for dir_bit in (0, 1):
            sz = 1 if pol_bit == dir_bit else -1
            col_mode = 2 * pol_bit + dir_bit
            flip_mode = 2 * (1 - pol_bit) + (1 - dir_bit)
            for spin_bit in (0, 1):
                coupled = (spin_bit == 0) == (sz == 1)
                refl, trans = (
                    (coeffs.r, coeffs.t) if coupled else (coeffs.r0, coeffs.t0)
                )
                col = 2 * col_mode + spin_bit
                m[2 * flip_mode + spin_bit, col] = refl
                m[2 * col_mode + spin_bit, col] += trans
    return Operator(m, requires_frame=CIRCULAR)
