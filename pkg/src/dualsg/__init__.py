"""Dual Stern-Gerlach interferometer phase, visibility and entanglement toolkit."""

from .analysis import (
    CalibrationResult,
    CPParams,
    JumpReport,
    VisibilityMinimum,
    calibrate,
    cp_gravity_ratio,
    cp_potential,
    find_inflection,
    find_phase_jump,
    min_visibility,
    unwrap_phase,
)
from .config import ConfigError, RunConfig, SweepAxis, load_config
from .model import (
    CouplingConvention,
    ExperimentParams,
    GeometryError,
    TraceRow,
    alpha,
    branch_phases,
    evolve,
    phase_classical_closed,
    phase_quantum_closed,
    reference_params,
    semiclassical_phase,
)
from .states import (
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
    reduced_visibility,
    single_qubit_superposition,
    two_qubit_state,
)

__version__ = "0.1.0"
