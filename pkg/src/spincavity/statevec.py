"""Dense complex state vectors over labeled two-level subsystems.

Every subsystem (electron spin, photon polarization, photon propagation
direction) is a qubit-sized degree of freedom. The basis convention is
fixed globally:

    bit 0  <->  R (circular frame) / H (linear frame), direction up, spin up
    bit 1  <->  L / V, direction down, spin down

The first subsystem in a state's ordering is the most significant bit of
the amplitude index. States are immutable; all operations return new
values. Squared norms may drop below one when lossy elements act, but a
state is never allowed to be zero or to exceed norm one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

SPIN = "spin"
POLARIZATION = "photon-polarization"
DIRECTION = "photon-direction"

CIRCULAR = "circular"
LINEAR = "linear"

NORM_TOL = 1e-12
_PROB_FLOOR = 1e-15


@dataclass(frozen=True)
class SubsystemLabel:
    """Identity of one two-level subsystem: what it is and who owns it."""

    kind: str
    owner: int
    frame: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (SPIN, POLARIZATION, DIRECTION):
            raise ValueError(f"unknown subsystem kind {self.kind!r}")
        if self.kind == POLARIZATION:
            if self.frame not in (CIRCULAR, LINEAR):
                raise ValueError("polarization labels require a circular or linear frame")
        elif self.frame is not None:
            raise ValueError(f"{self.kind} labels carry no frame")


def spin(owner: int) -> SubsystemLabel:
    return SubsystemLabel(SPIN, owner)


def polarization(owner: int, frame: str = CIRCULAR) -> SubsystemLabel:
    return SubsystemLabel(POLARIZATION, owner, frame)


def direction(owner: int) -> SubsystemLabel:
    return SubsystemLabel(DIRECTION, owner)


@dataclass(frozen=True)
class StateVector:
    """Immutable amplitudes over an ordered tensor product of subsystems."""

    subsystems: tuple[SubsystemLabel, ...]
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        subs = tuple(self.subsystems)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size != 2 ** len(subs):
            raise ValueError(
                f"amplitude vector of length {amps.size} does not match {len(subs)} subsystems"
            )
        if len({(s.kind, s.owner) for s in subs}) != len(subs):
            raise ValueError("duplicate subsystem label")
        pol_owners = {s.owner for s in subs if s.kind == POLARIZATION}
        dir_owners = {s.owner for s in subs if s.kind == DIRECTION}
        if pol_owners != dir_owners:
            raise ValueError("each photon needs exactly one polarization and one direction")
        nsq = float(np.vdot(amps, amps).real)
        if nsq <= 0.0:
            raise ValueError("zero state vector")
        if nsq > 1.0 + NORM_TOL:
            raise ValueError(f"squared norm {nsq} exceeds 1")
        amps.flags.writeable = False
        object.__setattr__(self, "subsystems", subs)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_subsystems(self) -> int:
        return len(self.subsystems)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amplitudes.reshape([2] * self.n_subsystems)

    def axis_of(self, label: SubsystemLabel) -> int:
        try:
            return self.subsystems.index(label)
        except ValueError:
            raise ValueError(f"subsystem {label} not present") from None

    def find(self, kind: str, owner: int) -> SubsystemLabel:
        """Look up a subsystem by kind and owner, ignoring the frame flag."""
        for s in self.subsystems:
            if s.kind == kind and s.owner == owner:
                return s
        raise ValueError(f"no {kind} subsystem for owner {owner}")

    def relabel(self, old: SubsystemLabel, new: SubsystemLabel) -> "StateVector":
        subs = tuple(new if s == old else s for s in self.subsystems)
        return StateVector(subs, self.amplitudes)


@dataclass(frozen=True)
class Operator:
    """A complex matrix acting on a (possibly unbound) list of subsystems.

    Factories such as the waveplates return unbound operators; call
    ``on(...)`` to attach them to concrete subsystem labels before
    application. ``requires_frame`` restricts polarization targets to one
    frame so protocol sequencing bugs fail loudly.
    """

    matrix: np.ndarray
    targets: tuple[SubsystemLabel, ...] | None = None
    requires_frame: str | None = None

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        n = m.shape[0]
        if n & (n - 1) or n == 0:
            raise ValueError("operator dimension must be a power of two")
        if self.targets is not None and 2 ** len(self.targets) != n:
            raise ValueError("operator dimension does not match target count")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n_targets(self) -> int:
        return int(np.log2(self.matrix.shape[0]))

    def on(self, *labels: SubsystemLabel) -> "Operator":
        return replace(self, targets=tuple(labels))

    def is_unitary(self, tol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < tol)


def make_product_state(
    factors: list[tuple[SubsystemLabel, np.ndarray]],
) -> StateVector:
    """Tensor product of normalized single-subsystem vectors, in the given order."""
    if not factors:
        raise ValueError("empty factor list")
    labels = [lab for lab, _ in factors]
    if len({(l.kind, l.owner) for l in labels}) != len(labels):
        raise ValueError("duplicate subsystem label")
    amps = np.array([1.0 + 0j])
    for label, vec in factors:
        v = np.asarray(vec, dtype=complex).reshape(-1)
        if v.size != 2:
            raise ValueError(f"factor for {label} is not a two-component vector")
        n = np.linalg.norm(v)
        if n < NORM_TOL:
            raise ValueError(f"zero-norm factor for {label}")
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"factor for {label} is not normalized (norm {n})")
        amps = np.kron(amps, v)
    return StateVector(tuple(labels), amps)


def apply_operator(state: StateVector, op: Operator) -> StateVector:
    """Apply ``op`` on its bound targets, acting as identity elsewhere."""
    if op.targets is None:
        raise ValueError("operator has no bound targets")
    axes = [state.axis_of(t) for t in op.targets]
    if op.requires_frame is not None:
        for t in op.targets:
            if t.kind == POLARIZATION and t.frame != op.requires_frame:
                raise ValueError(
                    f"operator requires the {op.requires_frame} frame, "
                    f"target is {t.frame}"
                )
    n = state.n_subsystems
    k = len(axes)
    psi = np.moveaxis(state.tensor(), axes, range(k)).reshape(2**k, -1)
    out = op.matrix @ psi
    out = np.moveaxis(out.reshape([2] * n), range(k), axes)
    return StateVector(state.subsystems, out.reshape(-1))


def fidelity(state_a: StateVector, state_b: StateVector) -> float:
    """Squared overlap of the normalized states, in [0, 1]."""
    if state_a.subsystems != state_b.subsystems:
        raise ValueError("states have different subsystem lists")
    na = state_a.norm_squared()
    nb = state_b.norm_squared()
    if na < _PROB_FLOOR or nb < _PROB_FLOOR:
        raise ValueError("fidelity of a zero vector is undefined")
    ov = np.vdot(state_a.amplitudes, state_b.amplitudes)
    return float(min(1.0, (abs(ov) ** 2) / (na * nb)))


def measure_polarization(
    state: StateVector, photon: int
) -> list[tuple[str, float, StateVector]]:
    """Project a photon onto the H/V detector basis.

    Returns (outcome, probability, post-measurement state) for every branch
    with nonzero probability. Probabilities are conditioned on the state
    (they sum to one even when the state is sub-normalized). The measured
    photon's polarization and direction subsystems are absorbed by the
    detector and removed from the returned states, which are renormalized.
    """
    pol = state.find(POLARIZATION, photon)
    if pol.frame != LINEAR:
        raise ValueError(
            "polarization is still in the circular frame; "
            "the output waveplate must act before detection"
        )
    dirlab = state.find(DIRECTION, photon)
    pol_ax = state.axis_of(pol)
    dir_ax = state.axis_of(dirlab)
    total = state.norm_squared()
    psi = state.tensor()
    remaining = tuple(s for s in state.subsystems if s not in (pol, dirlab))
    branches: list[tuple[str, float, StateVector]] = []
    for bit, outcome in ((0, "H"), (1, "V")):
        proj = np.take(psi, bit, axis=pol_ax)
        d_ax = dir_ax - 1 if dir_ax > pol_ax else dir_ax
        weight = float(np.sum(np.abs(proj) ** 2))
        if weight / total < _PROB_FLOOR:
            continue
        # The detector sits on a single output port: by the time a photon is
        # measured its direction must be definite, otherwise removal of the
        # direction subsystem is ill-defined.
        dir_weights = [
            float(np.sum(np.abs(np.take(proj, b, axis=d_ax)) ** 2)) for b in (0, 1)
        ]
        live = int(np.argmax(dir_weights))
        if dir_weights[1 - live] > 1e-9 * weight:
            raise ValueError("photon direction is not definite at detection")
        vec = np.take(proj, live, axis=d_ax).reshape(-1)
        vec = vec / np.sqrt(weight)
        branches.append((outcome, weight / total, StateVector(remaining, vec)))
    return branches


def haar_random_spin(rng: np.random.Generator) -> np.ndarray:
    """One spin state drawn uniformly from the unitarily invariant measure."""
    while True:
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        n = np.linalg.norm(z)
        if n > 1e-6:
            return z / n
