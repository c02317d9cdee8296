"""
Time integration: RK4 stepping, blow-up detection and trajectory observation.
"""

from .rk4 import (
    IntegratorConfig,
    BlowUpReport,
    Trajectory,
    StepController,
    Observer,
    rk4_step,
    integrate,
    conserved_drift,
)

__all__ = [
    "IntegratorConfig",
    "BlowUpReport",
    "Trajectory",
    "StepController",
    "Observer",
    "rk4_step",
    "integrate",
    "conserved_drift",
]
