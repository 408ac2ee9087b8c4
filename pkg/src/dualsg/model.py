"""Gravitational phase model for a pair of adjacent Stern-Gerlach interferometers.

Two nanoparticles, each of mass m = 2*m0, are split into spatial
superpositions of width dx, held a center-to-center distance d apart,
and accumulate phase under their mutual gravity for a time T.  All
phases are closed-form in t through the action scale

    alpha(t) = G * m0^2 * t / hbar        (units of length)

optionally doubled under the M0_TIMES_M pairing convention.  The branch
phases and the mean-field (single effective source) phase are

    phi1(t) =  alpha * dx / (d * (d - dx))          closest branch pair
    phi2(t) = -alpha * dx / (d * (d + dx))          farthest branch pair
    phi(t)  =  alpha * dx / (d^2 - dx^2 / 4)        source at the partner's center

The two hypotheses evaluated side by side are: branch-dependent sources
(entangling evolution, the "quantum" phase Phi_Q) and a mean-field
source per interferometer (product evolution, the "semiclassical" phase
Phi_C).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .states import (
    ORTHOGONALITY_TOL,
    UndefinedPhaseError,
    concurrence,
    overlap_visibility,
    pancharatnam_phase,
    reduced_visibility,
    two_qubit_state,
)

GRAVITATIONAL_CONSTANT = 6.674e-11   # m^3 kg^-1 s^-2
REDUCED_PLANCK = 1.0546e-34          # J s
SPEED_OF_LIGHT = 2.9979e8            # m / s


class GeometryError(ValueError):
    """The interferometer geometry is degenerate (branches touch or cross)."""


class CouplingConvention(enum.Enum):
    """How the action scale pairs the two masses.

    M0_SQUARED uses alpha = G m0^2 t / hbar; M0_TIMES_M uses the
    component mass against the full mass m = 2 m0, i.e. exactly twice
    the M0_SQUARED value.  Every report names the convention used.
    """

    M0_SQUARED = "m0sq"
    M0_TIMES_M = "m0m"

    @property
    def factor(self) -> float:
        return 1.0 if self is CouplingConvention.M0_SQUARED else 2.0


@dataclass(frozen=True)
class ExperimentParams:
    """Immutable physical configuration of the dual interferometer.

    m0   component mass in kg (each particle weighs m = 2 m0)
    d    center-to-center separation of the two interferometers, m
    dx   spatial split within each interferometer, m
    T    total interferometer time, s
    G, hbar, c   physical constants; overridable so unit-sanity checks
                 can set G = hbar = 1 (c only feeds the feasibility
                 estimators)
    coupling     mass-pairing convention for alpha
    """

    m0: float
    d: float
    dx: float
    T: float
    G: float = GRAVITATIONAL_CONSTANT
    hbar: float = REDUCED_PLANCK
    c: float = SPEED_OF_LIGHT
    coupling: CouplingConvention = CouplingConvention.M0_SQUARED

    def __post_init__(self):
        for name in ("m0", "T", "G", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.dx) and self.dx > 0):
            raise GeometryError(f"dx must be positive, got {self.dx!r}")
        if not (math.isfinite(self.d) and self.d > self.dx):
            raise GeometryError(
                f"d must exceed dx (got d = {self.d!r}, dx = {self.dx!r}): "
                "otherwise the branch pairs touch or cross")


def reference_params(**overrides) -> ExperimentParams:
    """Default operating point: 5e-14 kg components split 250 um at 450 um
    separation over 1.5 s."""
    base = dict(m0=5e-14, d=450e-6, dx=250e-6, T=1.5)
    base.update(overrides)
    return ExperimentParams(**base)


def _check_time(p: ExperimentParams, t: float) -> None:
    # Accepts a relative sliver beyond T so that 12-digit printed grids
    # round-trip; anything more is a usage error.
    if not math.isfinite(t) or t < 0.0 or t > p.T * (1.0 + 1e-9):
        raise ValueError(f"t must lie in [0, T = {p.T!r}], got {t!r}")


def alpha(p: ExperimentParams, t: float) -> float:
    """Accumulated action scale (meters) at time t."""
    _check_time(p, t)
    return p.coupling.factor * p.G * p.m0 * p.m0 * t / p.hbar


def branch_phases(p: ExperimentParams, t: float) -> tuple[float, float]:
    """Branch phases (phi1, phi2) at time t.

    phi1 > 0 belongs to the closest branch pair and always dominates
    phi2 < 0 in magnitude, since d - dx < d + dx.
    """
    a = alpha(p, t)
    phi1 = a * p.dx / (p.d * (p.d - p.dx))
    phi2 = -a * p.dx / (p.d * (p.d + p.dx))
    return phi1, phi2


def semiclassical_phase(p: ExperimentParams, t: float) -> float:
    """Mean-field phase phi at time t (monotone linear in t).

    The effective source sits at the partner interferometer's center,
    i.e. at distances d -+ dx/2 from the two local branches.
    """
    a = alpha(p, t)
    return a * p.dx / (p.d * p.d - p.dx * p.dx / 4.0)


def phase_quantum_closed(phi1: float, phi2: float, *,
                         tol: float = ORTHOGONALITY_TOL) -> float:
    """Closed form of the entangling-evolution Pancharatnam phase.

    With s = (phi1 + phi2)/2 and delta = (phi1 - phi2)/2 the overlap of
    the evolved four-level state with the initial one is
    (1 + e^{is} cos delta) / 2, so the phase is

        atan2(sin s * cos delta, 1 + cos s * cos delta).

    The two-argument arctangent fixes the branch; the single-argument
    form of the same ratio cannot.  Kept as a cross-check of the overlap
    route, which is what `evolve` reports.
    """
    if not (math.isfinite(phi1) and math.isfinite(phi2)):
        raise ValueError("branch phases must be finite")
    s = 0.5 * (phi1 + phi2)
    delta = 0.5 * (phi1 - phi2)
    num = math.sin(s) * math.cos(delta)
    den = 1.0 + math.cos(s) * math.cos(delta)
    if math.hypot(num, den) <= 2.0 * tol:     # overlap modulus <= tol
        raise UndefinedPhaseError("overlap vanishes: phase undefined")
    phase = math.atan2(num, den)
    if phase <= -math.pi:
        phase = math.pi
    return phase


def phase_classical_closed(phi: float, *, tol: float = ORTHOGONALITY_TOL) -> float:
    """Closed form of the product-evolution Pancharatnam phase.

    Arg[(1 + e^{i phi}) / 2] = atan2(sin phi, 1 + cos phi): the half
    phase phi/2 folded to (-pi/2, pi/2], with a jump of magnitude pi
    wherever phi crosses an odd multiple of pi (zero overlap).
    """
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    num = math.sin(phi)
    den = 1.0 + math.cos(phi)
    if math.hypot(num, den) <= 2.0 * tol:
        raise UndefinedPhaseError(
            f"overlap vanishes at phi = {phi!r}: phase undefined")
    phase = math.atan2(num, den)
    if phase <= -math.pi:
        phase = math.pi
    return phase


@dataclass(frozen=True)
class TraceRow:
    """One time sample of both hypotheses.

    Phase fields are radians; visibilities and concurrence are
    dimensionless in [0, 1].  A phase that is undefined at this sample
    (vanishing overlap) is recorded as NaN, which for generic parameters
    can only happen to Phi_C.
    """

    t: float
    phi1: float
    phi2: float
    phi_sc: float
    Phi_Q: float
    Phi_C: float
    vis_Q_global: float
    vis_Q_reduced: float
    vis_C: float
    concurrence: float


#: Column order of a trace; matches TraceRow field order and the CSV header.
TRACE_FIELDS = ("t", "phi1", "phi2", "phi_sc", "Phi_Q", "Phi_C",
                "vis_Q_global", "vis_Q_reduced", "vis_C", "concurrence")


def evolve(p: ExperimentParams, t: float) -> TraceRow:
    """Evaluate both hypotheses at a single time point.

    Phi_Q is computed from the state overlap, not from the closed form.
    Undefined phases become NaN markers rather than exceptions, so a
    trace across a singularity stays rectangular.
    """
    phi1, phi2 = branch_phases(p, t)
    phi_sc = semiclassical_phase(p, t)
    start = two_qubit_state(0.0, 0.0)
    evolved = two_qubit_state(phi1, phi2)
    try:
        phase_q = pancharatnam_phase(start, evolved)
    except UndefinedPhaseError:
        phase_q = math.nan
    try:
        phase_c = phase_classical_closed(phi_sc)
    except UndefinedPhaseError:
        phase_c = math.nan
    return TraceRow(
        t=t,
        phi1=phi1,
        phi2=phi2,
        phi_sc=phi_sc,
        Phi_Q=phase_q,
        Phi_C=phase_c,
        vis_Q_global=overlap_visibility(start, evolved),
        vis_Q_reduced=reduced_visibility(evolved, 1),
        vis_C=abs(math.cos(0.5 * phi_sc)),
        concurrence=concurrence(evolved),
    )
