"""Exact state-vector geometry, phases, speed limits and entanglement of
N spin-s particles under the long-range Ising interaction."""

__version__ = "0.1.0"

from .hilbert import (  # noqa: E402
    DensityMatrix,
    DimensionError,
    ParamPoint,
    PureState,
    SpinValue,
    SystemConfig,
    build_initial_state,
    build_spin_operators,
    evolve,
    hamiltonian_moments,
    overlap,
    partial_trace,
    purity,
)
from .geometry import (  # noqa: E402
    MetricTensor2,
    MetricTensor3,
    TopologyReport,
    euler_characteristic,
    gaussian_curvature,
    gaussian_curvature_numeric,
    metric_closed_form,
    metric_numeric,
)
from .phases import PhaseBreakdown, aa_phase, dynamical_phase, geometric_phase, global_phase  # noqa: E402
from .dynamics import BrachistochroneSolution, brachistochrone, geodesic_distance, maximize_speed, speed  # noqa: E402
from .entanglement import (  # noqa: E402
    ConcurrenceContext,
    iconcurrence_exact,
    iconcurrence_short_time,
)

__all__ = [
    "BrachistochroneSolution", "ConcurrenceContext", "DensityMatrix", "DimensionError", "MetricTensor2",
    "MetricTensor3", "ParamPoint", "PhaseBreakdown", "PureState", "SpinValue", "SystemConfig", "TopologyReport",
    "aa_phase", "brachistochrone", "build_initial_state", "build_spin_operators", "dynamical_phase",
    "euler_characteristic", "evolve", "gaussian_curvature", "gaussian_curvature_numeric", "geodesic_distance",
    "geometric_phase", "global_phase", "hamiltonian_moments", "iconcurrence_exact", "iconcurrence_short_time",
    "maximize_speed", "metric_closed_form", "metric_numeric", "overlap", "partial_trace", "purity", "speed",
]
