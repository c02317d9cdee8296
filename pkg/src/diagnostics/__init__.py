"""
Diagnostics: functionals, blow-up bounds and absorbing-ball data.
"""

from .functionals import (
    m_imag,
    n_real,
    mass_sigma,
    charge,
    gradient_sum,
    power_sum,
    sobolev_norm_sq,
    energy_drgl,
    hamiltonian_dnls,
    modified_energy_dnls,
    is_monotone,
)
from .bounds import (
    IMAG_BETA,
    REAL_K,
    BOUND_CASES,
    BoundEstimate,
    BoundInput,
    bound_nongauge,
    bound_gauge_drgl,
    dissipation_window,
    dnls_sobolev_bound,
)
from .attractor import (
    FINITE,
    WEIGHTED,
    AttractorReport,
    lambda1_star,
    finite_radii,
    default_finite_rho1,
    absorbing_finite,
    finite_envelope,
    sigma0,
    dcgl_exponential_margin,
    exponential_condition_holds,
    absorbing_weighted,
    weighted_envelope,
    tail_entry_time,
    tail_mass,
)

__all__ = [
    # Functionals
    "m_imag",
    "n_real",
    "mass_sigma",
    "charge",
    "gradient_sum",
    "power_sum",
    "sobolev_norm_sq",
    "energy_drgl",
    "hamiltonian_dnls",
    "modified_energy_dnls",
    "is_monotone",
    # Blow-up bounds
    "IMAG_BETA",
    "REAL_K",
    "BOUND_CASES",
    "BoundEstimate",
    "BoundInput",
    "bound_nongauge",
    "bound_gauge_drgl",
    "dissipation_window",
    "dnls_sobolev_bound",
    # Absorbing balls
    "FINITE",
    "WEIGHTED",
    "AttractorReport",
    "lambda1_star",
    "finite_radii",
    "default_finite_rho1",
    "absorbing_finite",
    "finite_envelope",
    "sigma0",
    "dcgl_exponential_margin",
    "exponential_condition_holds",
    "absorbing_weighted",
    "weighted_envelope",
    "tail_entry_time",
    "tail_mass",
]
