"""Exact Gaussian simulation of oscillator detectors extracting vacuum entanglement."""

__version__ = "0.1.0"

from .symplectic import (
    GaussianState,
    NumericalError,
    QuadraticHamiltonian,
    SymplecticTransform,
    SystemLayout,
    apply,
    build_hamiltonian,
    compose,
    evolve_segment,
    matrix_exp,
    partial_trace,
    symplectic_form,
    two_mode_squeeze,
    vacuum_state,
)
from .entanglement import (
    EntanglementResult,
    TwoModeInvariants,
    mean_excitations,
    negativity,
    partial_transpose,
    symplectic_eigenvalues,
    two_mode_invariants,
)
from .scenarios import (
    AcceleratedSpec,
    InertialSpec,
    ScenarioResult,
    SwitchingSchedule,
    SweepAxis,
    SweepTable,
    UnruhResponse,
    closed_form_excitations,
    minkowski_to_rindler_duration,
    run_accelerated,
    run_inertial,
    schedule_for,
    squeezing_from_acceleration,
    sweep,
    unruh_response,
)
