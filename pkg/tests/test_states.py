"""Unit tests for the pure-state algebra: overlaps, phases, visibilities,
entanglement measures and the Jacobi eigensolver."""

import math

import numpy as np
import pytest

from dualsg.states import (
    ConvergenceError,
    DensityMatrix4,
    PureState,
    TwoQubitState,
    UndefinedPhaseError,
    concurrence,
    hermitian_eigenvalues,
    inner_product,
    negativity,
    overlap_visibility,
    pancharatnam_phase,
    partial_transpose_qubit2,
    reduced_visibility,
    single_qubit_superposition,
    two_qubit_state,
)


# ---------------------------------------------------------------- states

def test_construction_checks_normalization():
    PureState([1.0, 0.0])
    with pytest.raises(ValueError, match="not normalized"):
        PureState([1.0, 1.0])
    s = PureState([1.0, 1.0], normalize=True)
    assert np.sum(np.abs(s.amplitudes) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_construction_rejects_bad_shapes_and_values():
    with pytest.raises(ValueError, match="dimension"):
        PureState([1.0, 0.0, 0.0])
    with pytest.raises(ValueError, match="finite"):
        PureState([math.nan, 0.0])
    with pytest.raises(ValueError, match="finite"):
        PureState([1.0, complex(0.0, math.inf)])
    with pytest.raises(ValueError, match="null"):
        PureState([0.0, 0.0], normalize=True)
    with pytest.raises(ValueError, match="4 amplitudes"):
        TwoQubitState([1.0, 0.0])


def test_two_qubit_state_examples():
    assert np.allclose(two_qubit_state(0.0, 0.0).amplitudes,
                       np.array([1, 1, 1, 1]) / 2.0)
    assert np.allclose(two_qubit_state(math.pi, 0.0).amplitudes,
                       np.array([1, -1, 1, 1]) / 2.0, atol=1e-15)
    assert np.allclose(two_qubit_state(math.pi / 2, -math.pi / 2).amplitudes,
                       np.array([1, 1j, -1j, 1]) / 2.0, atol=1e-15)
    with pytest.raises(ValueError, match="finite"):
        two_qubit_state(math.inf, 0.0)


def test_constructed_states_are_normalized():
    rng = np.random.default_rng(7)
    for phi1, phi2 in rng.uniform(-10, 10, size=(200, 2)):
        s = two_qubit_state(phi1, phi2)
        assert abs(np.sum(np.abs(s.amplitudes) ** 2) - 1.0) <= 1e-12


def test_single_qubit_superposition():
    assert np.allclose(single_qubit_superposition(0.0).amplitudes,
                       np.array([1, 1]) / math.sqrt(2))
    assert np.allclose(single_qubit_superposition(math.pi).amplitudes,
                       np.array([1, -1]) / math.sqrt(2), atol=1e-15)
    with pytest.raises(ValueError):
        single_qubit_superposition(math.nan)


# ---------------------------------------------------------------- overlaps

def test_inner_product_identity_and_trivial_cases():
    for s in (single_qubit_superposition(0.7), two_qubit_state(1.3, -2.2)):
        z = inner_product(s, s)
        assert z == pytest.approx(1.0 + 0.0j, abs=1e-12)
    z = inner_product(two_qubit_state(0.0, 0.0), two_qubit_state(0.0, 0.0))
    assert z == pytest.approx(1.0 + 0.0j, abs=1e-12)
    # (2 + e^{i pi} + e^{i pi}) / 4 = 0 by hand
    z = inner_product(two_qubit_state(0.0, 0.0), two_qubit_state(math.pi, math.pi))
    assert abs(z) <= 1e-12


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        inner_product(single_qubit_superposition(0.0), two_qubit_state(0.0, 0.0))


def test_inner_product_bounded():
    rng = np.random.default_rng(11)
    for phis in rng.uniform(-7, 7, size=(100, 4)):
        a = two_qubit_state(phis[0], phis[1])
        b = two_qubit_state(phis[2], phis[3])
        assert abs(inner_product(a, b)) <= 1.0 + 1e-12


# ---------------------------------------------------------------- phase

def test_pancharatnam_trivial_cases():
    s = two_qubit_state(0.4, -1.1)
    assert pancharatnam_phase(s, s) == pytest.approx(0.0, abs=1e-12)
    # pure global phase
    base = single_qubit_superposition(0.0)
    rotated = PureState(np.exp(0.3j) * base.amplitudes)
    assert pancharatnam_phase(base, rotated) == pytest.approx(0.3, abs=1e-12)
    # overlap (2 + 2 cos 1)/4 is real positive
    assert pancharatnam_phase(two_qubit_state(0.0, 0.0),
                              two_qubit_state(1.0, -1.0)) == pytest.approx(0.0, abs=1e-12)


def test_pancharatnam_orthogonal_raises():
    with pytest.raises(UndefinedPhaseError):
        pancharatnam_phase(two_qubit_state(0.0, 0.0),
                           two_qubit_state(math.pi, math.pi))


def test_pancharatnam_antisymmetry_and_principal_value():
    rng = np.random.default_rng(13)
    for phis in rng.uniform(-7, 7, size=(300, 4)):
        a = two_qubit_state(phis[0], phis[1])
        b = two_qubit_state(phis[2], phis[3])
        try:
            forward = pancharatnam_phase(a, b)
        except UndefinedPhaseError:
            continue
        assert -math.pi < forward <= math.pi
        if abs(abs(forward) - math.pi) > 1e-9:     # boundary +pi maps to +pi both ways
            assert pancharatnam_phase(b, a) == pytest.approx(-forward, abs=1e-12)


def test_phase_visibility_decomposition():
    rng = np.random.default_rng(17)
    for phis in rng.uniform(-7, 7, size=(200, 4)):
        a = two_qubit_state(phis[0], phis[1])
        b = two_qubit_state(phis[2], phis[3])
        z = inner_product(a, b)
        if abs(z) <= 1e-9:
            continue
        rebuilt = overlap_visibility(a, b) * np.exp(1j * pancharatnam_phase(a, b))
        assert abs(rebuilt - z) <= 1e-12


def test_single_qubit_pair_phase_is_half_the_relative_phase():
    got = pancharatnam_phase(single_qubit_superposition(0.0),
                             single_qubit_superposition(1.0))
    assert got == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------------- visibility

def test_overlap_visibility_cases():
    s = two_qubit_state(0.9, 0.2)
    assert overlap_visibility(s, s) == pytest.approx(1.0, abs=1e-12)
    assert overlap_visibility(two_qubit_state(0.0, 0.0),
                              two_qubit_state(math.pi, math.pi)) <= 1e-12
    # |<psi(0)|psi(phi)>| = |1 + e^{i phi}| / 2 = |cos(phi/2)|
    for phi in np.linspace(-6.0, 6.0, 25):
        got = overlap_visibility(single_qubit_superposition(0.0),
                                 single_qubit_superposition(phi))
        assert got == pytest.approx(abs(math.cos(phi / 2.0)), abs=1e-12)


def _reduced_offdiag_oracle(amps: np.ndarray, which: int) -> complex:
    rho = np.outer(amps, amps.conj()).reshape(2, 2, 2, 2)
    if which == 1:
        red = np.einsum("ibjb->ij", rho)
    else:
        red = np.einsum("aiaj->ij", rho)
    return complex(red[0, 1])


def test_reduced_visibility_matches_partial_trace_oracle():
    rng = np.random.default_rng(19)
    for phi1, phi2 in rng.uniform(-7, 7, size=(200, 2)):
        s = two_qubit_state(phi1, phi2)
        expect = abs(math.cos((phi1 + phi2) / 2.0))
        for which in (1, 2):
            got = reduced_visibility(s, which)
            assert got == pytest.approx(expect, abs=1e-12)
            oracle = 2.0 * abs(_reduced_offdiag_oracle(s.amplitudes, which))
            assert got == pytest.approx(oracle, abs=1e-12)


def test_reduced_visibility_cases_and_errors():
    assert reduced_visibility(two_qubit_state(0.0, 0.0), 1) == pytest.approx(1.0)
    assert reduced_visibility(two_qubit_state(2.0, math.pi - 2.0), 1) \
        == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError, match="1 or 2"):
        reduced_visibility(two_qubit_state(0.0, 0.0), 3)
    with pytest.raises(ValueError, match="two-qubit"):
        reduced_visibility(single_qubit_superposition(0.0), 1)


# ---------------------------------------------------------------- entanglement

def _product_state(phi_a: float, phi_b: float) -> TwoQubitState:
    a = single_qubit_superposition(phi_a).amplitudes
    b = single_qubit_superposition(phi_b).amplitudes
    return TwoQubitState(np.kron(a, b))


def test_concurrence_product_states_vanish():
    rng = np.random.default_rng(23)
    for pa, pb in rng.uniform(-7, 7, size=(50, 2)):
        assert concurrence(_product_state(pa, pb)) <= 1e-12


def test_concurrence_closed_form_and_symmetry():
    assert concurrence(two_qubit_state(2.0, math.pi - 2.0)) == pytest.approx(1.0, abs=1e-12)
    got = concurrence(two_qubit_state(3.296, -0.942))
    assert got == pytest.approx(abs(math.sin(1.177)), abs=1e-12)
    assert got == pytest.approx(0.923, abs=1e-3)
    rng = np.random.default_rng(29)
    for phi1, phi2 in rng.uniform(-7, 7, size=(100, 2)):
        assert concurrence(two_qubit_state(phi1, phi2)) \
            == pytest.approx(concurrence(two_qubit_state(phi2, phi1)), abs=1e-12)


def test_complementarity_of_contrast_and_entanglement():
    rng = np.random.default_rng(31)
    for phi1, phi2 in rng.uniform(-7, 7, size=(300, 2)):
        s = two_qubit_state(phi1, phi2)
        total = reduced_visibility(s, 1) ** 2 + concurrence(s) ** 2
        assert total == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------- negativity

def test_density_matrix_validation():
    rho = DensityMatrix4.from_pure(two_qubit_state(1.0, 2.0))
    assert np.trace(rho.matrix) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError, match="Hermitian"):
        m = np.eye(4, dtype=complex) / 4.0
        m[0, 1] = 0.1
        DensityMatrix4(m)
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix4(np.eye(4, dtype=complex))
    with pytest.raises(ValueError, match="positive"):
        m = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
        DensityMatrix4(m)
    with pytest.raises(ValueError, match="4x4"):
        DensityMatrix4(np.eye(2) / 2.0)


def test_negativity_textbook_values():
    bell = TwoQubitState(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2))
    assert negativity(DensityMatrix4.from_pure(bell)) == pytest.approx(0.5, abs=1e-10)
    product = DensityMatrix4.from_pure(_product_state(0.6, -1.9))
    assert negativity(product) == pytest.approx(0.0, abs=1e-10)


def test_negativity_equals_half_concurrence():
    rng = np.random.default_rng(37)
    for phi1, phi2 in rng.uniform(-2 * math.pi, 2 * math.pi, size=(200, 2)):
        s = two_qubit_state(phi1, phi2)
        neg = negativity(DensityMatrix4.from_pure(s))
        assert neg == pytest.approx(concurrence(s) / 2.0, abs=1e-9)


def test_partial_transpose_moves_the_right_indices():
    m = np.arange(16, dtype=complex).reshape(4, 4)
    pt = partial_transpose_qubit2(m)
    # (i j),(k l) -> (i l),(k j): element [(0,0),(0,1)] swaps with [(0,1),(0,0)]
    assert pt[0, 1] == m[1, 0]
    assert pt[1, 0] == m[0, 1]
    assert pt[0, 0] == m[0, 0]
    assert pt[2, 3] == m[3, 2]
    assert pt[0, 2] == m[0, 2]      # qubit-1 indices untouched


# ---------------------------------------------------------------- eigensolver

def test_jacobi_matches_numpy_on_random_hermitians():
    rng = np.random.default_rng(41)
    for _ in range(100):
        raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        herm = (raw + raw.conj().T) / 2.0
        got = hermitian_eigenvalues(herm)
        expect = np.linalg.eigvalsh(herm)
        assert np.max(np.abs(got - expect)) <= 1e-10


def test_jacobi_diagonal_input_is_immediate():
    got = hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0, 0.5]).astype(complex))
    assert np.allclose(got, [-1.0, 0.5, 2.0, 3.0])


def test_jacobi_reports_non_convergence():
    raw = np.array([[1.0, 0.5], [0.5, -1.0]], dtype=complex)
    with pytest.raises(ConvergenceError):
        hermitian_eigenvalues(raw, max_sweeps=0)
