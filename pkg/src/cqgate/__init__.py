"""Simulation toolkit for a single-pulse cavity-mediated controlled-phase
gate between two optically driven three-level quantum dots."""

__version__ = "0.1.0"

from .adiabatic import AdiabaticResult, EigenTrajectory, adiabatic_evolve, eigen_track
from .density import DensityMatrix, pure_state
from .entangle import (
    GatePhases,
    apply_phase_gate,
    concurrence,
    extract_phases,
    reduce_to_qubits,
)
from .errors import CQGateError, ConfigError, SolverError
from .frame import (
    ComplexTrajectory,
    displacement_solution,
    displacement_trajectory,
    effective_rabi,
    steady_state_amplitude,
)
from .hilbert import HilbertSpace, build_space, hamiltonian_at, lindblad_ops
from .lindblad import GateRunResult, MasterSolution, evolve_master, gate_run
from .model import (
    CavityMode,
    DotParams,
    DrivePulse,
    NumericOptions,
    SystemConfig,
    TimeGrid,
    ValidatedSystem,
    load_config,
    save_config,
    validate_config,
)
from .perturb import (
    AnalyticEstimates,
    adiabatic_min_sigma,
    analytic_estimates,
    cooperativity,
    fidelity_estimate,
    optimal_detuning,
)
from .sweep import (
    CalibrationResult,
    DetuningResult,
    SweepResult,
    calibrate_amplitude,
    concurrence_surface,
    optimize_detuning,
    sweep_to_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
