"""Quantum advisor: GHZ state, Bloch-parameterized projective measurements,
conditional distributions, the planar closed-form payoff and its gauge
symmetry.

Conventions (load-bearing, fixed once here):

* Shared state |Psi> = (|111> + i|000>)/sqrt(2); basis order |abc> with
  a = party A, tensor order A (x) B (x) C, |0> = (1, 0).  The relative
  phase i is what turns the planar triple correlator into a sine.
* Outcome y = 1 corresponds to eigenvalue +1 (projector (I + M)/2),
  y = 0 to eigenvalue -1.  This also fixes the sign of Bell correlators.
* Planar restriction: all polar angles theta = pi/2, leaving one azimuth
  per observable; the six azimuths are (a0, a1, b0, b1, c0, c1) where the
  digit is the player's type bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .classical import BellVariant, bell_expression
from .game import (
    PLAYERS,
    PROFILES,
    ConditionalDistribution,
    PayoffTriple,
    Player,
    Prior,
    UtilityTable,
    ValidationError,
    expected_payoffs,
)

TAU = 2 * math.pi
ALGEBRA_TOL = 1e-12

IDENTITY2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def wrap_angle(x: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    r = math.remainder(x, TAU)
    if r <= -math.pi:
        r += TAU
    return r


def ghz_state() -> np.ndarray:
    vec = np.zeros(8, dtype=complex)
    vec[0b111] = 1 / math.sqrt(2)
    vec[0b000] = 1j / math.sqrt(2)
    return vec


@dataclass(frozen=True)
class BlochObservable:
    """A +/-1 observable n.sigma given by Bloch angles (theta, phi)."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValidationError("Bloch angles must be finite")


def observable_matrix(obs: BlochObservable) -> np.ndarray:
    """n.sigma for the unit vector n(theta, phi); Hermitian with n^2 = 1."""
    st, ct = math.sin(obs.theta), math.cos(obs.theta)
    sp, cp = math.sin(obs.phi), math.cos(obs.phi)
    return st * cp * PAULI_X + st * sp * PAULI_Y + ct * PAULI_Z


def projectors(obs: BlochObservable) -> tuple[np.ndarray, np.ndarray]:
    """Spectral projectors (P0, P1): P1 = (I+M)/2 (outcome 1, eigenvalue +1),
    P0 = (I-M)/2 (outcome 0, eigenvalue -1)."""
    m = observable_matrix(obs)
    return (IDENTITY2 - m) / 2, (IDENTITY2 + m) / 2


class PlanarAngles(NamedTuple):
    """Azimuths of the six equatorial observables, one per (player, type)."""

    a0: float
    a1: float
    b0: float
    b1: float
    c0: float
    c1: float

    def wrapped(self) -> "PlanarAngles":
        return PlanarAngles(*(wrap_angle(v) for v in self))


@dataclass(frozen=True)
class MeasurementSetting:
    """Two Bloch observables per player, indexed by the player's type bit."""

    a: tuple[BlochObservable, BlochObservable]
    b: tuple[BlochObservable, BlochObservable]
    c: tuple[BlochObservable, BlochObservable]

    @classmethod
    def planar(cls, angles: PlanarAngles) -> "MeasurementSetting":
        half = math.pi / 2
        return cls(
            a=(BlochObservable(half, angles.a0), BlochObservable(half, angles.a1)),
            b=(BlochObservable(half, angles.b0), BlochObservable(half, angles.b1)),
            c=(BlochObservable(half, angles.c0), BlochObservable(half, angles.c1)),
        )

    def observables(self, player: Player) -> tuple[BlochObservable, BlochObservable]:
        return (self.a, self.b, self.c)[player]

    def replace_player(
        self, player: Player, obs: tuple[BlochObservable, BlochObservable]
    ) -> "MeasurementSetting":
        parts = [self.a, self.b, self.c]
        parts[player] = obs
        return MeasurementSetting(*parts)

    def is_planar(self, tol: float = ALGEBRA_TOL) -> bool:
        half = math.pi / 2
        return all(
            abs(o.theta - half) <= tol
            for pair in (self.a, self.b, self.c)
            for o in pair
        )

    def planar_angles(self, tol: float = ALGEBRA_TOL) -> PlanarAngles | None:
        if not self.is_planar(tol):
            return None
        return PlanarAngles(
            self.a[0].phi, self.a[1].phi,
            self.b[0].phi, self.b[1].phi,
            self.c[0].phi, self.c[1].phi,
        )


@dataclass(frozen=True, eq=False)
class QuantumAdvisor:
    """Tripartite density operator on the 8-dimensional joint space."""

    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (8, 8):
            raise ValidationError(f"advisor state must be 8x8, got {rho.shape}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def validate(self, tol: float = ALGEBRA_TOL) -> None:
        dev = np.abs(self.rho - self.rho.conj().T).max()
        if dev > tol:
            raise ValidationError(f"advisor state not Hermitian (deviation {dev:.3e})")
        trace = complex(np.trace(self.rho))
        if abs(trace - 1) > tol:
            raise ValidationError(f"advisor state trace is {trace:.12g}, expected 1")
        lo = float(np.linalg.eigvalsh(self.rho).min())
        if lo < -tol:
            raise ValidationError(
                f"advisor state not positive semidefinite (min eigenvalue {lo:.3e})"
            )


def ghz_advisor() -> QuantumAdvisor:
    vec = ghz_state()
    return QuantumAdvisor(np.outer(vec, vec.conj()))


def maximally_mixed_advisor() -> QuantumAdvisor:
    return QuantumAdvisor(np.eye(8, dtype=complex) / 8)


def quantum_distribution(
    advisor: QuantumAdvisor, setting: MeasurementSetting
) -> ConditionalDistribution:
    """p(y|x) = Tr(rho  P_A^{y_A} (x) P_B^{y_B} (x) P_C^{y_C}).

    Rows sum to 1 and satisfy no-signalling up to numerical error (1e-12
    scale); entries may undershoot zero by the same amount.
    """
    advisor.validate()
    rho6 = np.asarray(advisor.rho).reshape(2, 2, 2, 2, 2, 2)
    stacks = []
    for player in PLAYERS:
        per_type = []
        for obs in setting.observables(player):
            p0, p1 = projectors(obs)
            per_type.append(np.stack([p0, p1]))
        stacks.append(per_type)
    rows = []
    for x in PROFILES:
        pa, pb, pc = (stacks[i][x[i]] for i in PLAYERS)
        # p[yA,yB,yC] = sum rho[abc,def] PA[yA][d,a] PB[yB][e,b] PC[yC][f,c]
        p = np.einsum("abcdef,uda,veb,wfc->uvw", rho6, pa, pb, pc)
        rows.append(tuple(float(v) for v in p.real.reshape(8)))
    return ConditionalDistribution(tuple(rows))


def quantum_payoffs(
    table: UtilityTable,
    prior: Prior,
    advisor: QuantumAdvisor,
    setting: MeasurementSetting,
) -> PayoffTriple:
    """Expected payoffs with quantum advice: the shared bilinear form applied
    to the trace-rule distribution (utilities become floats on this path)."""
    dist = quantum_distribution(advisor, setting)
    return expected_payoffs(table, prior, dist)


def planar_payoff(angles: PlanarAngles) -> float:
    """Common payoff of all three players for GHZ advice with equatorial
    measurements at the bundled game's utilities.

    Closed form: only the triple correlator of the GHZ state survives on the
    equator and equals -sin of the summed azimuths, which contracts the
    64-term payoff sum to eight sine terms over a constant 26/48.
    """
    a0, a1, b0, b1, c0, c1 = angles
    s = math.sin
    return (
        26
        + 3 * s(a0 + b0 + c0)
        + 2 * s(a1 + b0 + c0)
        + 2 * s(a0 + b1 + c0)
        - 3 * s(a1 + b1 + c0)
        + 2 * s(a0 + b0 + c1)
        - 3 * s(a1 + b0 + c1)
        - 3 * s(a0 + b1 + c1)
        - 2 * s(a1 + b1 + c1)
    ) / 48


def planar_payoff_grid(
    a0, a1, b0, b1, c0, c1
):
    """Vectorized (numpy broadcasting) form of planar_payoff."""
    s = np.sin
    return (
        26
        + 3 * s(a0 + b0 + c0)
        + 2 * s(a1 + b0 + c0)
        + 2 * s(a0 + b1 + c0)
        - 3 * s(a1 + b1 + c0)
        + 2 * s(a0 + b0 + c1)
        - 3 * s(a1 + b0 + c1)
        - 3 * s(a0 + b1 + c1)
        - 2 * s(a1 + b1 + c1)
    ) / 48


def gauge_transform(
    angles: PlanarAngles, chi1: float, chi2: float, chi3: float
) -> PlanarAngles:
    """Shift each player's pair of azimuths by a common phase.

    Valid only when chi1 + chi2 + chi3 is a multiple of 2*pi: the shift then
    acts on the GHZ state as a global sign, so the payoff is unchanged.
    """
    residue = math.remainder(chi1 + chi2 + chi3, TAU)
    if abs(residue) > ALGEBRA_TOL:
        raise ValidationError(
            f"gauge shifts must sum to a multiple of 2*pi "
            f"(residue {residue:.3e})"
        )
    return PlanarAngles(
        angles.a0 + chi1, angles.a1 + chi1,
        angles.b0 + chi2, angles.b1 + chi2,
        angles.c0 + chi3, angles.c1 + chi3,
    ).wrapped()


def gauge_canonicalize(angles: PlanarAngles) -> PlanarAngles:
    """The unique gauge-equivalent angle tuple with a0 = b0 = 0.

    Two planar settings are gauge-equivalent iff their canonical forms agree
    componentwise modulo 2*pi.
    """
    shifted = gauge_transform(angles, -angles.a0, -angles.b0, angles.a0 + angles.b0)
    # force the fixed components to exact zeros (they are zero up to -0.0)
    return PlanarAngles(0.0, shifted.a1, 0.0, shifted.b1, shifted.c0, shifted.c1)


def angle_distance(x: float, y: float) -> float:
    """Distance between two angles modulo 2*pi."""
    return abs(wrap_angle(x - y))


def gauge_equivalent(
    first: PlanarAngles, second: PlanarAngles, tol: float = 1e-4
) -> bool:
    ca, cb = gauge_canonicalize(first), gauge_canonicalize(second)
    return all(angle_distance(u, v) <= tol for u, v in zip(ca, cb))


def ghz_single_party_marginal(projector: np.ndarray, party: Player) -> float:
    """Probability of one party's rank-1 measurement outcome on GHZ advice.

    The GHZ reduced state of any single party is maximally mixed, so this is
    1/2 for every rank-1 projector: no measurement setting can reproduce a
    deterministic single-party marginal, hence none of the unfair classical
    equilibrium distributions is quantum-realizable with this advisor.
    """
    p = np.asarray(projector, dtype=complex)
    if p.shape != (2, 2):
        raise ValidationError(f"projector must be 2x2, got {p.shape}")
    if np.abs(p - p.conj().T).max() > ALGEBRA_TOL:
        raise ValidationError("projector must be Hermitian")
    if np.abs(p @ p - p).max() > 1e-10:
        raise ValidationError("projector must be idempotent")
    if abs(np.trace(p).real - 1) > 1e-10:
        raise ValidationError("projector must have rank 1 (trace 1)")
    ops = [IDENTITY2, IDENTITY2, IDENTITY2]
    ops[party] = p
    lifted = np.kron(np.kron(ops[0], ops[1]), ops[2])
    vec = ghz_state()
    return float(np.real(vec.conj() @ lifted @ vec))


def quantum_bell(
    advisor: QuantumAdvisor, setting: MeasurementSetting, variant: BellVariant
) -> float:
    """Bell-variant value of the quantum distribution; may exceed 2."""
    return float(bell_expression(quantum_distribution(advisor, setting), variant))


# ---------------------------------------------------------------------------
# Setting file format: twelve angles in radians with keys theta_A0 .. phi_C1,
# or the planar shorthand of exactly the six phi keys (thetas default pi/2).
# Schema ships in docs/setting.schema.json.
# ---------------------------------------------------------------------------

_SLOTS = [f"{p}{t}" for p in "ABC" for t in (0, 1)]
FULL_KEYS = [f"theta_{s}" for s in _SLOTS] + [f"phi_{s}" for s in _SLOTS]
PLANAR_KEYS = [f"phi_{s}" for s in _SLOTS]


def setting_to_json_dict(setting: MeasurementSetting) -> dict:
    doc = {}
    for player, name in zip(PLAYERS, "ABC"):
        for t, obs in enumerate(setting.observables(player)):
            doc[f"theta_{name}{t}"] = obs.theta
            doc[f"phi_{name}{t}"] = obs.phi
    return doc


def setting_from_json_dict(doc: dict) -> MeasurementSetting:
    if not isinstance(doc, dict):
        raise ValidationError("setting document must be a JSON object")
    keys = set(doc)
    if keys == set(PLANAR_KEYS):
        return MeasurementSetting.planar(
            PlanarAngles(*(float(doc[k]) for k in PLANAR_KEYS))
        )
    missing = set(FULL_KEYS) - keys
    extra = keys - set(FULL_KEYS)
    if missing or extra:
        raise ValidationError(
            "setting must carry the twelve angle keys or the six-phi planar "
            f"shorthand; missing {sorted(missing)}, unexpected {sorted(extra)}"
        )
    pairs = []
    for name in "ABC":
        pairs.append(
            tuple(
                BlochObservable(
                    float(doc[f"theta_{name}{t}"]), float(doc[f"phi_{name}{t}"])
                )
                for t in (0, 1)
            )
        )
    return MeasurementSetting(*pairs)


def load_setting(path: str | Path) -> MeasurementSetting:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}"
        ) from exc
    try:
        return setting_from_json_dict(doc)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def dump_setting(setting: MeasurementSetting, path: str | Path) -> None:
    Path(path).write_text(json.dumps(setting_to_json_dict(setting), indent=2) + "\n")
