"""Pure-state linear algebra for two- and four-level systems.

Overlaps, Pancharatnam phases, interferometric visibilities and
entanglement measures for the spin states arising in a pair of
Stern-Gerlach interferometers.

The four-dimensional basis order is fixed and load-bearing:

    index 0 = |up, up>,  1 = |up, down>,  2 = |down, up>,  3 = |down, down>

where the first arrow is qubit 1 (left interferometer) and the second is
qubit 2.  Every entanglement formula below assumes this ordering.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

#: Overlap modulus at or below which a relative phase is treated as undefined.
ORTHOGONALITY_TOL = 1e-9

#: Allowed deviation of a state's squared norm from unity.
NORM_TOL = 1e-12


class UndefinedPhaseError(ArithmeticError):
    """The requested phase is the argument of a (near-)null overlap.

    This is the singularity condition of the interferometer: where the
    evolved state becomes orthogonal to the initial one, the fringe
    contrast vanishes and no phase can be read out.
    """


class ConvergenceError(RuntimeError):
    """The iterative eigensolver did not reach its tolerance."""


class PureState:
    """Normalized pure state of a two- or four-dimensional system.

    Amplitudes are held as a complex vector.  Construction rejects
    non-finite entries and any vector whose squared norm deviates from 1
    by more than ``NORM_TOL``; pass ``normalize=True`` to rescale raw
    amplitudes instead.
    """

    def __init__(self, amplitudes, *, normalize: bool = False):
        amps = np.array(amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] not in (2, 4):
            raise ValueError(f"state dimension must be 2 or 4, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state amplitudes must be finite")
        sumsq = float(np.sum(np.abs(amps) ** 2))
        if normalize:
            if sumsq < 1e-300:
                raise ValueError("cannot normalize a null vector")
            amps = amps / math.sqrt(sumsq)
        elif abs(sumsq - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |a_i|^2 = {sumsq!r}")
        self.amplitudes = amps

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.amplitudes.tolist()!r})"


class TwoQubitState(PureState):
    """Four-amplitude pure state in the fixed (uu, ud, du, dd) basis."""

    def __init__(self, amplitudes, *, normalize: bool = False):
        super().__init__(amplitudes, normalize=normalize)
        if self.dimension != 4:
            raise ValueError("TwoQubitState requires exactly 4 amplitudes")


def two_qubit_state(phi1: float, phi2: float) -> TwoQubitState:
    """Equal-weight two-qubit state with branch phases on the cross terms.

    Returns (|uu> + e^{i phi1}|ud> + e^{i phi2}|du> + |dd>) / 2, which is
    normalized by construction.  With phi1 = phi2 = 0 this is the product
    state prepared by the beam-splitting pulses.
    """
    if not (math.isfinite(phi1) and math.isfinite(phi2)):
        raise ValueError("branch phases must be finite")
    amps = np.array([1.0, cmath.exp(1j * phi1), cmath.exp(1j * phi2), 1.0]) / 2.0
    return TwoQubitState(amps)


def single_qubit_superposition(phi: float) -> PureState:
    """Equal-weight single-qubit state (|up> + e^{i phi}|down>) / sqrt(2)."""
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    return PureState(np.array([1.0, cmath.exp(1j * phi)]) / math.sqrt(2.0))


def inner_product(a: PureState, b: PureState) -> complex:
    """Hermitian inner product <a|b> = sum_i conj(a_i) b_i."""
    if a.dimension != b.dimension:
        raise ValueError(f"dimension mismatch: {a.dimension} vs {b.dimension}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def pancharatnam_phase(initial: PureState, final: PureState, *,
                       tol: float = ORTHOGONALITY_TOL) -> float:
    """Pancharatnam phase Arg <initial|final>, principal value in (-pi, pi].

    Raises UndefinedPhaseError when the overlap modulus does not exceed
    ``tol``; at that point the two states are (numerically) orthogonal
    and the phase is genuinely meaningless.
    """
    z = inner_product(initial, final)
    if abs(z) <= tol:
        raise UndefinedPhaseError(
            f"overlap modulus {abs(z):.3e} is below the tolerance {tol:.1e}")
    phase = math.atan2(z.imag, z.real)
    if phase <= -math.pi:
        # atan2(-0.0, x < 0) gives -pi; fold onto the +pi branch boundary
        phase = math.pi
    return phase


def overlap_visibility(initial: PureState, final: PureState) -> float:
    """Joint fringe contrast |<initial|final>|."""
    return abs(inner_product(initial, final))


def reduced_visibility(state: PureState, which: int) -> float:
    """Single-interferometer fringe contrast after tracing out the partner.

    ``which`` is the 1-based qubit index.  Returns twice the modulus of
    the off-diagonal element of the reduced one-qubit density matrix,
    i.e. the contrast a local readout of that qubit alone would see.
    """
    if state.dimension != 4:
        raise ValueError("reduced visibility requires a two-qubit state")
    a = state.amplitudes
    if which == 1:
        off = a[0] * np.conj(a[2]) + a[1] * np.conj(a[3])
    elif which == 2:
        off = a[0] * np.conj(a[1]) + a[2] * np.conj(a[3])
    else:
        raise ValueError(f"qubit index must be 1 or 2, got {which!r}")
    return float(2.0 * abs(off))


def concurrence(state: PureState) -> float:
    """Pure-state concurrence 2 |a0 a3 - a1 a2| in the fixed basis.

    Zero exactly on product states, one on maximally entangled states.
    """
    if state.dimension != 4:
        raise ValueError("concurrence requires a two-qubit state")
    a = state.amplitudes
    return float(2.0 * abs(a[0] * a[3] - a[1] * a[2]))


class DensityMatrix4:
    """Validated 4x4 density matrix (Hermitian, unit trace, PSD).

    Hermiticity and trace are checked to 1e-12, positivity to -1e-10 on
    the smallest eigenvalue.
    """

    HERMITICITY_TOL = 1e-12
    TRACE_TOL = 1e-12
    PSD_TOL = 1e-10

    def __init__(self, matrix):
        m = np.array(matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix entries must be finite")
        if float(np.max(np.abs(m - m.conj().T))) > self.HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within 1e-12")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > self.TRACE_TOL:
            raise ValueError(f"trace must be 1, got {tr!r}")
        if float(hermitian_eigenvalues(m)[0]) < -self.PSD_TOL:
            raise ValueError("matrix is not positive semidefinite")
        self.matrix = m

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityMatrix4":
        """Projector |state><state| of a four-dimensional pure state."""
        if state.dimension != 4:
            raise ValueError("a 4-dimensional state is required")
        a = state.amplitudes
        return cls(np.outer(a, a.conj()))


def hermitian_eigenvalues(matrix, *, tol: float = 1e-12,
                          max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation is the unitary

        J[p,p] = cos(theta),  J[p,q] = -sin(theta) e^{i arg(a_pq)},
        J[q,p] = sin(theta) e^{-i arg(a_pq)},  J[q,q] = cos(theta),

    with tan(2 theta) = 2 |a_pq| / (a_pp - a_qq), which annihilates the
    (p, q) off-diagonal pair of A <- J^dagger A J.  Sweeps repeat until
    the off-diagonal Frobenius norm drops below ``tol``.

    Returns the eigenvalues sorted ascending.  Raises ConvergenceError
    if ``max_sweeps`` sweeps are not enough.
    """
    a = np.array(matrix, dtype=np.complex128)
    n = a.shape[0]

    def off_norm(mat):
        off = mat - np.diag(np.diagonal(mat))
        return math.sqrt(float(np.sum(np.abs(off) ** 2)))

    for _ in range(max_sweeps):
        if off_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) == 0.0:
                    continue
                diff = a[p, p].real - a[q, q].real
                if diff == 0.0:
                    theta = math.pi / 4.0
                else:
                    theta = 0.5 * math.atan2(2.0 * abs(apq), diff)
                c = math.cos(theta)
                s = math.sin(theta)
                phase = cmath.exp(1j * math.atan2(apq.imag, apq.real))
                rot = np.eye(n, dtype=np.complex128)
                rot[p, p] = c
                rot[p, q] = -s * phase
                rot[q, p] = s * np.conj(phase)
                rot[q, q] = c
                a = rot.conj().T @ a @ rot
    else:
        if off_norm(a) >= tol:
            raise ConvergenceError(
                f"Jacobi sweep limit {max_sweeps} reached with "
                f"off-diagonal norm {off_norm(a):.3e} >= {tol:.1e}")
    return np.sort(np.real(np.diagonal(a)))


def partial_transpose_qubit2(rho: np.ndarray) -> np.ndarray:
    """Transpose the second-qubit indices of a two-qubit density matrix."""
    m = np.asarray(rho, dtype=np.complex128)
    return m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def negativity(rho: DensityMatrix4, *, tol: float = 1e-12,
               max_sweeps: int = 100) -> float:
    """Entanglement negativity from the partial transpose on qubit 2.

    Sum of |negative eigenvalues| of rho^{T_2}, diagonalized with the
    Jacobi solver above.  For pure two-qubit states this equals half the
    concurrence, which makes it an independent cross-check of that
    closed form.
    """
    pt = partial_transpose_qubit2(rho.matrix)
    evs = hermitian_eigenvalues(pt, tol=tol, max_sweeps=max_sweeps)
    return float(-np.sum(evs[evs < 0.0]))
