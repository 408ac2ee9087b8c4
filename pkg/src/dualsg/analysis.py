"""Feature detection, calibration and feasibility estimates on the phase model.

Detectors operate on closed-form model output: root finding for the
semiclassical phase jump, finite-difference scans for quantum-curve
features, golden-section search for visibility minima.  Windows passed
to any detector are clamped to the physical interval [0, T].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    CouplingConvention,
    ExperimentParams,
    GeometryError,
    branch_phases,
    phase_classical_closed,
    semiclassical_phase,
)
from .states import (
    UndefinedPhaseError,
    overlap_visibility,
    pancharatnam_phase,
    reduced_visibility,
    two_qubit_state,
)

#: Adjacent-sample phase step (radians) above which a scan reports a jump.
JUMP_THRESHOLD = 0.5

#: Local grid refinement factor applied around a scan candidate.
REFINE = 4


@dataclass(frozen=True)
class JumpReport:
    """A detected phase discontinuity.

    ``magnitude`` is the limit difference across the bracket (drift
    corrected for the semiclassical model, so it is -pi up to floating
    point error regardless of bracket width).
    """

    t_jump: float
    magnitude: float
    bracket: tuple[float, float]
    model: str
    convention: CouplingConvention


@dataclass(frozen=True)
class VisibilityMinimum:
    """Result of a visibility minimization.

    ``coarse`` is True when the pre-scan found the window non-unimodal
    and the result is the grid argmin rather than a refined minimum.
    """

    t_min: float
    v_min: float
    coarse: bool = False


@dataclass(frozen=True)
class CalibrationResult:
    """Detectability of the gravitational phase at the working point."""

    delta_phi: float
    detectable: bool
    min_m0: float


@dataclass(frozen=True)
class CPParams:
    """Geometry and material inputs for the Casimir-Polder estimate.

    R        sphere radius, m
    d        center-to-center separation, m (must exceed 2R)
    epsilon  relative permittivity of the sphere material (>= 1)
    """

    R: float
    d: float
    epsilon: float
    c: float = 2.9979e8
    hbar: float = 1.0546e-34

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 0):
            raise ValueError(f"R must be positive, got {self.R!r}")
        if not (math.isfinite(self.d) and self.d > 2.0 * self.R):
            raise GeometryError(
                f"d must exceed 2R (got d = {self.d!r}, R = {self.R!r}): spheres overlap")
        if not (math.isfinite(self.epsilon) and self.epsilon >= 1.0):
            raise ValueError(f"epsilon must be >= 1, got {self.epsilon!r}")


def _clamp_window(p: ExperimentParams, window) -> tuple[float, float]:
    t0, t1 = (0.0, p.T) if window is None else window
    t0 = max(0.0, float(t0))
    t1 = min(p.T, float(t1))
    if not (math.isfinite(t0) and math.isfinite(t1) and t0 < t1):
        raise ValueError(f"window must satisfy 0 <= t0 < t1 <= T, got {window!r}")
    return t0, t1


def _quantum_phase(p: ExperimentParams, t: float) -> float:
    """Overlap-route quantum phase; NaN where undefined."""
    phi1, phi2 = branch_phases(p, t)
    try:
        return pancharatnam_phase(two_qubit_state(0.0, 0.0),
                                  two_qubit_state(phi1, phi2))
    except UndefinedPhaseError:
        return math.nan


def largest_phase_step(values) -> tuple[int, float]:
    """Index and signed size of the largest adjacent step in a sampled
    phase signal.  NaN samples are skipped.  Usable on external traces."""
    vals = np.asarray(values, dtype=float)
    diffs = np.diff(vals)
    diffs = np.where(np.isfinite(diffs), diffs, 0.0)
    k = int(np.argmax(np.abs(diffs)))
    return k, float(diffs[k])


def find_phase_jump(p: ExperimentParams, window=None, tol: float = 1e-6, *,
                    model: str = "semiclassical", points: int = 2000,
                    threshold: float = JUMP_THRESHOLD):
    """Locate a phase discontinuity inside ``window`` (default (0, T)).

    Semiclassical model: the phase is linear in t, so the first
    singularity is the unique root of phi(t) = pi; it is bracketed by
    bisection down to width ``tol`` and the jump magnitude is the
    drift-corrected difference across the bracket (-pi exactly, up to
    floating point).  Returns None when the window contains no crossing.

    Quantum model: the curve is scanned on a ``points``-sample grid, the
    largest adjacent step is re-sampled at ``REFINE`` times the density,
    and a JumpReport is returned only if the refined step still exceeds
    ``threshold`` radians.  A smooth curve thins out under refinement
    and yields None.
    """
    t0, t1 = _clamp_window(p, window)
    if not (math.isfinite(tol) and tol > 0):
        raise ValueError(f"tol must be positive, got {tol!r}")
    if model == "semiclassical":
        return _find_jump_semiclassical(p, t0, t1, tol)
    if model == "quantum":
        return _find_jump_scan(p, t0, t1, points, threshold)
    raise ValueError(f"model must be 'semiclassical' or 'quantum', got {model!r}")


def _find_jump_semiclassical(p, t0, t1, tol):
    g0 = semiclassical_phase(p, t0) - math.pi
    g1 = semiclassical_phase(p, t1) - math.pi
    if g0 >= 0.0 or g1 < 0.0:
        return None
    lo, hi = t0, t1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if semiclassical_phase(p, mid) - math.pi < 0.0:
            lo = mid
        else:
            hi = mid
    # Evaluate the wrapped phase a safe step outside the bracket, then
    # remove the linear drift: the remainder is the pure jump.
    step = max(tol, 1e-9)
    e_lo = max(t0, lo - step)
    e_hi = min(t1, hi + step)
    jump = (phase_classical_closed(semiclassical_phase(p, e_hi))
            - phase_classical_closed(semiclassical_phase(p, e_lo)))
    drift = 0.5 * (semiclassical_phase(p, e_hi) - semiclassical_phase(p, e_lo))
    return JumpReport(t_jump=0.5 * (lo + hi), magnitude=jump - drift,
                      bracket=(lo, hi), model="semiclassical",
                      convention=p.coupling)


def _find_jump_scan(p, t0, t1, points, threshold):
    if points < 3:
        raise ValueError(f"points must be >= 3, got {points!r}")
    ts = np.linspace(t0, t1, points)
    vals = np.array([_quantum_phase(p, t) for t in ts])
    k, _ = largest_phase_step(vals)
    lo = ts[max(k - 1, 0)]
    hi = ts[min(k + 2, points - 1)]
    # up to 3 coarse intervals re-sampled at REFINE times the density
    fine_ts = np.linspace(lo, hi, 3 * REFINE + 1)
    fine = np.array([_quantum_phase(p, t) for t in fine_ts])
    j, step = largest_phase_step(fine)
    if abs(step) < threshold:
        return None
    return JumpReport(t_jump=0.5 * (fine_ts[j] + fine_ts[j + 1]),
                      magnitude=step, bracket=(float(fine_ts[j]), float(fine_ts[j + 1])),
                      model="quantum", convention=p.coupling)


def find_inflection(p: ExperimentParams, window=None, *, points: int = 2000):
    """Earliest inflection of the quantum phase curve inside ``window``.

    The centered second difference of the sampled curve is scanned for a
    sign change whose magnitude rises above the floating-point noise
    floor; the surrounding interval is re-sampled at ``REFINE`` times
    the density and the crossing is located by linear interpolation.
    Returns None when the window holds no sign change.  The quantum
    curve must be smooth on the window (no undefined samples).
    """
    t0, t1 = _clamp_window(p, window)
    if points < 5:
        raise ValueError(f"points must be >= 5, got {points!r}")
    ts = np.linspace(t0, t1, points)
    vals = np.array([_quantum_phase(p, t) for t in ts])
    if not np.all(np.isfinite(vals)):
        raise ValueError("quantum phase is undefined inside the window")
    d2 = vals[2:] - 2.0 * vals[1:-1] + vals[:-2]
    floor = 64.0 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(vals))))
    for i in range(len(d2) - 1):
        if d2[i] == 0.0 or d2[i] * d2[i + 1] > 0.0:
            continue
        if max(abs(d2[i]), abs(d2[i + 1])) <= floor:
            continue    # numerically flat region, not a real curvature flip
        lo = ts[i]
        hi = ts[min(i + 3, points - 1)]
        fine_ts = np.linspace(lo, hi, 3 * REFINE + 1)
        fine = np.array([_quantum_phase(p, t) for t in fine_ts])
        fd2 = fine[2:] - 2.0 * fine[1:-1] + fine[:-2]
        for j in range(len(fd2) - 1):
            if fd2[j] != 0.0 and fd2[j] * fd2[j + 1] < 0.0:
                w = abs(fd2[j]) / (abs(fd2[j]) + abs(fd2[j + 1]))
                return float(fine_ts[j + 1] + w * (fine_ts[j + 2] - fine_ts[j + 1]))
        return 0.5 * (lo + hi)
    return None


_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def min_visibility(p: ExperimentParams, model: str = "quantum",
                   which: str = "global", window=None, *,
                   points: int = 2000,
                   bracket_tol: float = 1e-6) -> VisibilityMinimum:
    """Minimize the selected visibility curve over ``window``.

    ``model`` picks the hypothesis; for the quantum model ``which``
    selects the joint contrast ("global") or the traced-out
    single-interferometer contrast ("reduced").  The semiclassical curve
    is the single-interferometer contrast |cos(phi/2)| and ignores
    ``which``.

    A grid pre-scan checks unimodality; if it holds, golden-section
    search shrinks the bracket to ``bracket_tol`` seconds and the best
    probed point is returned.  A non-unimodal window falls back to the
    grid argmin, flagged ``coarse``.
    """
    t0, t1 = _clamp_window(p, window)
    if model == "semiclassical":
        fn = lambda t: abs(math.cos(0.5 * semiclassical_phase(p, t)))
    elif model == "quantum":
        start = two_qubit_state(0.0, 0.0)
        if which == "global":
            def fn(t):
                return overlap_visibility(start, two_qubit_state(*branch_phases(p, t)))
        elif which == "reduced":
            def fn(t):
                return reduced_visibility(two_qubit_state(*branch_phases(p, t)), 1)
        else:
            raise ValueError(f"which must be 'global' or 'reduced', got {which!r}")
    else:
        raise ValueError(f"model must be 'semiclassical' or 'quantum', got {model!r}")

    ts = np.linspace(t0, t1, points)
    vals = np.array([fn(t) for t in ts])
    k = int(np.argmin(vals))
    slack = 1e-12
    unimodal = (np.all(np.diff(vals[:k + 1]) <= slack)
                and np.all(np.diff(vals[k:]) >= -slack))
    if not unimodal:
        return VisibilityMinimum(t_min=float(ts[k]), v_min=float(vals[k]),
                                 coarse=True)

    a = float(ts[max(k - 1, 0)])
    b = float(ts[min(k + 1, points - 1)])
    best_t, best_v = float(ts[k]), float(vals[k])
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    while b - a > bracket_tol:
        if f1 < best_v:
            best_t, best_v = x1, f1
        if f2 < best_v:
            best_t, best_v = x2, f2
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = fn(x2)
    for x, f in ((x1, f1), (x2, f2)):
        if f < best_v:
            best_t, best_v = x, f
    return VisibilityMinimum(t_min=best_t, v_min=best_v, coarse=False)


def calibrate(p: ExperimentParams, sensitivity: float) -> CalibrationResult:
    """Detectability of the gravitational phase against a readout threshold.

    A short bias pulse parks the interferometer phase just below the
    singularity, at pi - delta_phi/2, so the full accumulated phase
    delta_phi = phi(T) is what drives the system across it.  Because
    phi is quadratic in m0, the smallest detectable component mass is
    m0 * sqrt(sensitivity / delta_phi).
    """
    if not (math.isfinite(sensitivity) and sensitivity > 0):
        raise ValueError(f"sensitivity must be positive, got {sensitivity!r}")
    delta_phi = semiclassical_phase(p, p.T)
    return CalibrationResult(
        delta_phi=delta_phi,
        detectable=delta_phi >= sensitivity,
        min_m0=p.m0 * math.sqrt(sensitivity / delta_phi),
    )


def cp_potential(cp: CPParams) -> float:
    """Casimir-Polder potential between two dielectric spheres, in joules.

    V = -(23 hbar c / 4 pi) (R^6 / d^6) ((eps - 1) / (eps + 2))^2

    An order-of-magnitude estimate: always <= 0, zero only for eps = 1
    (vacuum spheres), falling off as d^-6.
    """
    pol = (cp.epsilon - 1.0) / (cp.epsilon + 2.0)
    return -(23.0 * cp.hbar * cp.c / (4.0 * math.pi)) * (cp.R / cp.d) ** 6 * pol * pol


def cp_gravity_ratio(cp: CPParams, p: ExperimentParams) -> float:
    """|V_CP| over the gravitational energy scale G m0^2 / d.

    The figure of merit for whether gravity dominates at separation d
    (masses from ``p``, geometry from ``cp``); below 1 it does.
    """
    return abs(cp_potential(cp)) / (p.G * p.m0 * p.m0 / cp.d)


def unwrap_phase(values, period: float = 2.0 * math.pi) -> list[float]:
    """Remove modular jumps of size ``period`` from a sampled phase signal.

    Adjacent differences are folded into (-period/2, period/2] and then
    re-accumulated.  NaN samples are kept in place and bridged, so a
    trace with isolated undefined points stays continuous around them.
    """
    if not (math.isfinite(period) and period > 0):
        raise ValueError(f"period must be positive, got {period!r}")
    out: list[float] = []
    prev_raw = None
    prev_unwrapped = 0.0
    for v in values:
        if v is None or math.isnan(v):
            out.append(math.nan)
            continue
        if prev_raw is None:
            unwrapped = v
        else:
            d = v - prev_raw
            d -= period * math.floor(d / period + 0.5)
            unwrapped = prev_unwrapped + d
        out.append(unwrapped)
        prev_raw = v
        prev_unwrapped = unwrapped
    return out
