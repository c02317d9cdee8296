"""
Lattice equation models: parameters, difference operators and right-hand sides.
"""

from .params import (
    GAUGE,
    NON_GAUGE,
    GENERAL_F,
    NONLINEARITY_KINDS,
    SOURCE,
    LHS,
    SIGN_CONVENTIONS,
    GeneralParams,
    DCGLParams,
    Nonlinearity,
    drgl_params,
    dnls_params,
)
from .operators import (
    discrete_laplacian,
    forward_difference,
)
from .equations import (
    Derivative,
    nonlinear_profile,
    apply_nonlinearity,
    make_rhs,
    make_general_rhs,
    rhs_general,
    rhs_dcgl,
    dcgl_to_general,
    lipschitz_constant,
    local_existence_time,
)

__all__ = [
    # Parameters
    "GAUGE",
    "NON_GAUGE",
    "GENERAL_F",
    "NONLINEARITY_KINDS",
    "SOURCE",
    "LHS",
    "SIGN_CONVENTIONS",
    "GeneralParams",
    "DCGLParams",
    "Nonlinearity",
    "drgl_params",
    "dnls_params",
    # Operators
    "discrete_laplacian",
    "forward_difference",
    # Right-hand sides
    "Derivative",
    "nonlinear_profile",
    "apply_nonlinearity",
    "make_rhs",
    "make_general_rhs",
    "rhs_general",
    "rhs_dcgl",
    "dcgl_to_general",
    # Local existence
    "lipschitz_constant",
    "local_existence_time",
]
