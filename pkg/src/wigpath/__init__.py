"""wigpath: Wigner functions of radially squeezed bosonic states, computed
three independent ways -- exact closed forms, direct quadrature of the circle
path integral, and saddle-point asymptotics -- with cross-validation tooling.
"""

from .action import (
    ActionValue,
    CirclePath,
    chord_midpoint,
    circle_action,
    end_action,
    path_action,
    total_action,
)
from .integrate import (
    BudgetError,
    McResult,
    MidpointGrid,
    MonteCarloSpec,
    QuadratureSpec,
    RealnessError,
    midpoint_histogram,
    smoothed_wigner_from_histogram,
    wigner_montecarlo,
    wigner_quadrature,
)
from .phase_space import (
    PhaseSpaceScale,
    alpha_from_qp,
    coherent_overlap,
    displaced_parity_element,
    log_coherent_overlap,
    log_displaced_parity_element,
    polar,
    qp_from_alpha,
)
from .saddle import (
    RegionError,
    SaddleSolution,
    hessian_log_det,
    solve_saddle,
    stationary_action,
    stirling_log_partition,
    wigner_saddle,
    wigner_wkb,
)
from .special import bessel_i0, laguerre, log_bessel_i0, log_factorial
from .states import (
    FamilyParams,
    TruncationError,
    WignerSample,
    gaussian_convolve_p1,
    hamiltonian_eigenvalue,
    log_partition,
    quadratic_approx,
    weights,
    wigner_number,
    wigner_poisson,
    wigner_spectral,
)

__version__ = "0.1.0"

__all__ = [
    "ActionValue",
    "BudgetError",
    "CirclePath",
    "FamilyParams",
    "McResult",
    "MidpointGrid",
    "MonteCarloSpec",
    "PhaseSpaceScale",
    "QuadratureSpec",
    "RealnessError",
    "RegionError",
    "SaddleSolution",
    "TruncationError",
    "WignerSample",
    "alpha_from_qp",
    "bessel_i0",
    "chord_midpoint",
    "circle_action",
    "coherent_overlap",
    "displaced_parity_element",
    "end_action",
    "gaussian_convolve_p1",
    "hamiltonian_eigenvalue",
    "hessian_log_det",
    "laguerre",
    "log_bessel_i0",
    "log_coherent_overlap",
    "log_displaced_parity_element",
    "log_factorial",
    "log_partition",
    "midpoint_histogram",
    "path_action",
    "polar",
    "qp_from_alpha",
    "quadratic_approx",
    "smoothed_wigner_from_histogram",
    "solve_saddle",
    "stationary_action",
    "stirling_log_partition",
    "total_action",
    "weights",
    "wigner_montecarlo",
    "wigner_number",
    "wigner_poisson",
    "wigner_quadrature",
    "wigner_saddle",
    "wigner_spectral",
    "wigner_wkb",
]
