"""Multipartite quantum correlations of the anisotropic triangular transverse-field Ising model."""

from triq.classical import classical_ground_search, classical_xy_energy
from triq.correlations import (
    CorrelationReport,
    DensityMatrix,
    correlation_report,
    magnetic_susceptibility,
    mqc_susceptibility,
    negativity,
    partial_trace,
    partial_transpose,
    pure_density,
    t3,
)
from triq.errors import (
    AnalyticDomainError,
    ConvergenceError,
    InvalidConfigError,
    TriqError,
    UsageError,
)
from triq.hamiltonian import CouplingConfig, Spectrum, build_hamiltonian, eigendecompose
from triq.sweep import Axis, SweepResult, SweepSpec, run_sweep
from triq.thermal import gibbs_state, robustness_delta, thermal_t3

__version__ = "0.1.0"

__all__ = [
    "AnalyticDomainError",
    "Axis",
    "ConvergenceError",
    "CorrelationReport",
    "CouplingConfig",
    "DensityMatrix",
    "InvalidConfigError",
    "Spectrum",
    "SweepResult",
    "SweepSpec",
    "TriqError",
    "UsageError",
    "build_hamiltonian",
    "classical_ground_search",
    "classical_xy_energy",
    "correlation_report",
    "eigendecompose",
    "gibbs_state",
    "magnetic_susceptibility",
    "mqc_susceptibility",
    "negativity",
    "partial_trace",
    "partial_transpose",
    "pure_density",
    "robustness_delta",
    "run_sweep",
    "t3",
    "thermal_t3",
]
