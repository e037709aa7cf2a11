"""
magnomech: steady-state entanglement, Gaussian steering and stability of a
two-cavity magnomechanical system with a YIG sphere and a parametric frequency
converter.

Pipeline for one operating point:
    SystemParams -> solve_steady_state -> build_drift_diffusion
                 -> stability -> solve_lyapunov -> correlation_report
"""

from .exceptions import (
    MagnomechError, DomainError, ConfigError, ConvergenceError, SingularityError,
    NoSteadyStateError, NumericalError, PhysicalityError,
)
from .model import (
    PhysicalConstants, MaterialParams, BathOccupancy, SystemParams, MODES,
    thermal_occupancy, bath_occupancy, cavity_drive_amplitude, magnon_drive_amplitude,
    optomagnonic_coupling,
)
from .steadystate import SteadyState, solve_steady_state, simplified_magnon_amplitude
from .dynamics import DriftDiffusion, build_drift, build_diffusion, build_drift_diffusion
from .lyapunov import CovarianceMatrix, StabilityReport, solve_lyapunov, stability
from .measures import (
    BipartiteCM, PairCorrelations, CorrelationReport, SteeringClass,
    reduce_cm, log_negativity, steering, classify_steering, correlation_report,
)
from .sweep import SweepAxis, SweepSpec, SweepResult, run_sweep, detect_crossovers

__version__ = "0.1.0"
