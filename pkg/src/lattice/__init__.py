"""
Lattice core: geometry, states, norms, weights and initial data.
"""

from .errors import (
    LatticeError,
    NonFiniteInputError,
    DimensionError,
    ParameterOrderError,
    HypothesisError,
    InvalidRadiusError,
    UnsupportedNonlinearityError,
    ConfigError,
)
from .core import (
    FINITE_DIRICHLET,
    TRUNCATED_INFINITE,
    IMAGINARY_POSITIVE,
    REAL_POSITIVE,
    RANDOM_PHASE,
    LOCALIZED,
    ZERO,
    INITIAL_DATA_KINDS,
    LatticeGeometry,
    LatticeState,
    Weight,
    WeightValidation,
    WeightViolation,
    ScalingProfile,
    norm_p,
    weighted_norm,
    real_inner_product,
    weighted_inner_product,
    norm_equivalence_constants,
    validate_weight,
    make_initial_data,
    rescale_to_norm,
    extend_by_zero,
    restrict,
)

__all__ = [
    # Errors
    "LatticeError",
    "NonFiniteInputError",
    "DimensionError",
    "ParameterOrderError",
    "HypothesisError",
    "InvalidRadiusError",
    "UnsupportedNonlinearityError",
    "ConfigError",
    # Geometry and state
    "FINITE_DIRICHLET",
    "TRUNCATED_INFINITE",
    "LatticeGeometry",
    "LatticeState",
    # Norms and weights
    "Weight",
    "WeightValidation",
    "WeightViolation",
    "norm_p",
    "weighted_norm",
    "real_inner_product",
    "weighted_inner_product",
    "norm_equivalence_constants",
    "validate_weight",
    # Initial data
    "IMAGINARY_POSITIVE",
    "REAL_POSITIVE",
    "RANDOM_PHASE",
    "LOCALIZED",
    "ZERO",
    "INITIAL_DATA_KINDS",
    "ScalingProfile",
    "make_initial_data",
    "rescale_to_norm",
    "extend_by_zero",
    "restrict",
]
