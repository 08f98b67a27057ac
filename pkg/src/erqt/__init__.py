"""Steady-state currents through non-interacting junctions with extended reservoirs.

Units: hbar = e = k_B = 1. Currents are particle currents, positive from the
left reservoir into the system.
"""

from .current import (
    CurrentResult,
    Method,
    SweepResult,
    auto_window,
    compute_current,
    continuum_transmission,
    current_general,
    current_landauer_continuum,
    current_noninteracting,
    current_occupancy_large_gamma,
    current_pc_analytic,
    current_pc_integral,
    current_strong_gamma,
    current_weak_gamma,
    kramers_sweep,
    wide_band_matrix,
)
from .errors import (
    ConfigError,
    ErqtError,
    InvalidParameterError,
    NotProportionalError,
    QuadratureError,
    SingularMatrixError,
    UndampedSubspaceError,
    UnsupportedKindError,
)
from .greens import (
    NonInteractingProvider,
    delta_gamma_tilde,
    self_energy_r,
    spectral_densities,
    system_ga,
    system_glesser,
    system_gr,
)
from .model import (
    BiasSpec,
    JunctionModel,
    RelaxationKind,
    Reservoir,
    ReservoirMode,
    Side,
    check_proportionality,
    discretize_band,
    fermi,
    make_proportional_right,
    single_level,
)
from .quadrature import QuadratureSpec, integrate_adaptive
from .steadystate import (
    assemble_dynamics,
    current_from_c,
    lyapunov_current,
    occupations,
    propagate_transient,
    solve_steady_c,
)

__version__ = "0.1.0"

__all__ = [
    "BiasSpec",
    "ConfigError",
    "CurrentResult",
    "ErqtError",
    "InvalidParameterError",
    "JunctionModel",
    "Method",
    "NonInteractingProvider",
    "NotProportionalError",
    "QuadratureError",
    "QuadratureSpec",
    "RelaxationKind",
    "Reservoir",
    "ReservoirMode",
    "Side",
    "SingularMatrixError",
    "SweepResult",
    "UndampedSubspaceError",
    "UnsupportedKindError",
    "assemble_dynamics",
    "auto_window",
    "check_proportionality",
    "compute_current",
    "continuum_transmission",
    "current_from_c",
    "current_general",
    "current_landauer_continuum",
    "current_noninteracting",
    "current_occupancy_large_gamma",
    "current_pc_analytic",
    "current_pc_integral",
    "current_strong_gamma",
    "current_weak_gamma",
    "delta_gamma_tilde",
    "discretize_band",
    "fermi",
    "integrate_adaptive",
    "kramers_sweep",
    "lyapunov_current",
    "make_proportional_right",
    "occupations",
    "propagate_transient",
    "self_energy_r",
    "single_level",
    "solve_steady_c",
    "spectral_densities",
    "system_ga",
    "system_glesser",
    "system_gr",
    "wide_band_matrix",
]
