"""Unit tests for the gravitational phase model and its closed forms."""

import math

import numpy as np
import pytest

from dualsg.model import (
    CouplingConvention,
    ExperimentParams,
    GeometryError,
    TRACE_FIELDS,
    alpha,
    branch_phases,
    evolve,
    phase_classical_closed,
    phase_quantum_closed,
    reference_params,
    semiclassical_phase,
)
from dualsg.states import (
    UndefinedPhaseError,
    pancharatnam_phase,
    single_qubit_superposition,
    two_qubit_state,
)

M0M = CouplingConvention.M0_TIMES_M


# ---------------------------------------------------------------- params

def test_params_validation():
    reference_params()
    with pytest.raises(ValueError, match="m0"):
        reference_params(m0=-1e-14)
    with pytest.raises(ValueError, match="T"):
        reference_params(T=0.0)
    with pytest.raises(GeometryError, match="dx"):
        reference_params(dx=0.0)
    with pytest.raises(GeometryError, match="d must exceed dx"):
        reference_params(dx=500e-6)


def test_params_are_frozen():
    p = reference_params()
    with pytest.raises(AttributeError):
        p.m0 = 1.0


# ---------------------------------------------------------------- alpha

def test_alpha_direct_arithmetic():
    p = reference_params()
    assert alpha(p, 0.0) == 0.0
    expect = 6.674e-11 * (5e-14) ** 2 * 0.75 / 1.0546e-34
    assert alpha(p, 0.75) == pytest.approx(expect, rel=1e-12)
    assert expect == pytest.approx(1.187e-3, rel=1e-3)
    doubled = alpha(reference_params(coupling=M0M), 0.75)
    assert doubled == 2.0 * alpha(p, 0.75)      # exact factor two


def test_alpha_time_range():
    p = reference_params()
    with pytest.raises(ValueError, match="t must lie"):
        alpha(p, -0.1)
    with pytest.raises(ValueError, match="t must lie"):
        alpha(p, 2.0)
    alpha(p, p.T)                               # endpoint is fine


# ---------------------------------------------------------------- branch phases

def test_branch_phases_reference_values():
    p = reference_params()
    assert branch_phases(p, 0.0) == (0.0, 0.0)
    phi1, phi2 = branch_phases(p, 0.75)
    a = alpha(p, 0.75)
    assert phi1 == pytest.approx(a * p.dx / (p.d * (p.d - p.dx)), rel=1e-12)
    assert phi2 == pytest.approx(-a * p.dx / (p.d * (p.d + p.dx)), rel=1e-12)
    assert phi1 == pytest.approx(3.296, abs=1e-3)
    assert phi2 == pytest.approx(-0.942, abs=1e-3)


def test_branch_phase_structure():
    p = reference_params()
    for t in np.linspace(0.05, 1.5, 30):
        phi1, phi2 = branch_phases(p, t)
        assert phi1 > 0 > phi2
        assert abs(phi1) > abs(phi2)
        # shared alpha * dx across both denominators
        lhs = abs(phi1) * p.d * (p.d - p.dx)
        rhs = abs(phi2) * p.d * (p.d + p.dx)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_phases_are_linear_in_time():
    p = reference_params()
    for t in (0.2, 0.51, 0.7):
        phi1_t, phi2_t = branch_phases(p, t)
        phi1_2t, phi2_2t = branch_phases(p, 2 * t)
        assert phi1_2t == pytest.approx(2 * phi1_t, rel=1e-12)
        assert phi2_2t == pytest.approx(2 * phi2_t, rel=1e-12)
        assert semiclassical_phase(p, 2 * t) \
            == pytest.approx(2 * semiclassical_phase(p, t), rel=1e-12)


def test_small_split_kills_the_phases():
    p = reference_params(dx=1e-11)
    phi1, phi2 = branch_phases(p, 1.5)
    assert abs(phi1) < 1e-6 and abs(phi2) < 1e-6


def test_coupling_convention_doubles_every_phase():
    p1 = reference_params()
    p2 = reference_params(coupling=M0M)
    for t in (0.1, 0.75, 1.3):
        a1, a2 = branch_phases(p1, t), branch_phases(p2, t)
        assert a2[0] == 2.0 * a1[0] and a2[1] == 2.0 * a1[1]
        assert semiclassical_phase(p2, t) == 2.0 * semiclassical_phase(p1, t)


# ---------------------------------------------------------------- semiclassical phase

def test_semiclassical_phase_values_and_ordering():
    p = reference_params()
    assert semiclassical_phase(p, 0.0) == 0.0
    rate = semiclassical_phase(p, 1.0)
    assert rate == pytest.approx(2.117, abs=1e-3)
    assert semiclassical_phase(p, 0.75) == pytest.approx(1.587, abs=1e-3)
    for t in np.linspace(0.05, 1.5, 20):
        phi1, phi2 = branch_phases(p, t)
        phi = semiclassical_phase(p, t)
        assert phi2 < phi < phi1


# ---------------------------------------------------------------- closed forms

def test_quantum_closed_form_trivial_cases():
    assert phase_quantum_closed(0.0, 0.0) == 0.0
    assert phase_quantum_closed(1.3, -1.3) == pytest.approx(0.0, abs=1e-15)


def test_quantum_closed_form_matches_overlap_route():
    start = two_qubit_state(0.0, 0.0)
    grid = np.linspace(-2 * math.pi, 2 * math.pi, 64)
    for phi1 in grid[::4]:
        for phi2 in grid[::4]:
            try:
                via_overlap = pancharatnam_phase(start, two_qubit_state(phi1, phi2))
            except UndefinedPhaseError:
                with pytest.raises(UndefinedPhaseError):
                    phase_quantum_closed(phi1, phi2)
                continue
            assert phase_quantum_closed(phi1, phi2) \
                == pytest.approx(via_overlap, abs=1e-12)


def test_quantum_closed_form_degenerate_point():
    with pytest.raises(UndefinedPhaseError):
        phase_quantum_closed(math.pi, math.pi)


def test_classical_closed_form_values():
    assert phase_classical_closed(0.0) == 0.0
    assert phase_classical_closed(math.pi / 2) == pytest.approx(math.pi / 4, abs=1e-15)
    # magnitude-pi flip across the singularity
    above = phase_classical_closed(math.pi + 1e-6)
    below = phase_classical_closed(math.pi - 1e-6)
    assert below == pytest.approx(math.pi / 2 - 5e-7, abs=1e-9)
    assert above == pytest.approx(-(math.pi / 2 - 5e-7), abs=1e-9)
    with pytest.raises(UndefinedPhaseError):
        phase_classical_closed(math.pi)
    with pytest.raises(UndefinedPhaseError):
        phase_classical_closed(3 * math.pi)


def test_classical_closed_form_matches_single_qubit_overlap():
    start = single_qubit_superposition(0.0)
    for phi in np.linspace(-2 * math.pi, 2 * math.pi, 64):
        try:
            via_overlap = pancharatnam_phase(start, single_qubit_superposition(phi))
        except UndefinedPhaseError:
            with pytest.raises(UndefinedPhaseError):
                phase_classical_closed(phi)
            continue
        assert phase_classical_closed(phi) == pytest.approx(via_overlap, abs=1e-12)


# ---------------------------------------------------------------- evolve

def test_evolve_at_zero():
    row = evolve(reference_params(), 0.0)
    assert row.phi1 == row.phi2 == row.phi_sc == 0.0
    assert row.Phi_Q == row.Phi_C == 0.0
    assert row.vis_Q_global == row.vis_Q_reduced == row.vis_C == 1.0
    assert row.concurrence == pytest.approx(0.0, abs=1e-15)


def test_evolve_field_order_matches_csv_header():
    row = evolve(reference_params(), 0.3)
    assert tuple(row.__dataclass_fields__) == TRACE_FIELDS


def test_evolve_marks_undefined_classical_phase_as_nan():
    p = reference_params()
    rate = semiclassical_phase(p, 1.0)
    lo, hi = 1.4, 1.5
    for _ in range(80):                       # bisect the singularity phi = pi
        mid = 0.5 * (lo + hi)
        if semiclassical_phase(p, mid) < math.pi:
            lo = mid
        else:
            hi = mid
    t_sing = 0.5 * (lo + hi)
    assert rate * t_sing == pytest.approx(math.pi, abs=1e-12)
    row = evolve(p, t_sing)
    assert math.isnan(row.Phi_C)
    assert row.vis_C < 1e-9
    assert math.isfinite(row.Phi_Q)


def test_evolve_m0m_jump_signature_near_0742():
    # under the doubled coupling the contrast collapses near t = 0.742 s
    p = reference_params(coupling=M0M)
    t_sing = math.pi / semiclassical_phase(p, 1.0)
    assert t_sing == pytest.approx(0.742, abs=1e-3)
    row = evolve(p, t_sing * (1 + 1e-9))
    assert row.vis_C < 1e-6


def test_weak_field_hypotheses_indistinguishable():
    # dx/d = 1e-3 keeps every phase far below one radian; the two
    # hypotheses then differ by much less than the 0.01 rad readout scale
    p = reference_params(dx=450e-9)
    worst = 0.0
    for t in np.linspace(0.0, p.T, 200):
        row = evolve(p, float(t))
        assert abs(row.phi1) < 0.01
        worst = max(worst, abs(row.Phi_Q - row.Phi_C))
    assert worst < 0.01
