"""Plastic deformation drift of the elasto-perfectly-plastic oscillator under white noise.

Two independent routes to the asymptotic variance rate of the displacement:
Monte Carlo over projected Euler-Maruyama paths (direct time averages and
long-cycle statistics) and finite-difference solutions of the long-cycle
boundary-value problems.
"""
from .errors import (
    ConfigInvalid,
    CycleTimeout,
    DegenerateDenominator,
    EppError,
    InsufficientSamples,
    InvalidState,
    NonPositiveParam,
    OverdampedParam,
    QuadratureNotConverged,
    SolverDiverged,
    StepTooLarge,
)
from .params import OscillatorParams, validate_params

__version__ = "0.1.0"

__all__ = [
    "ConfigInvalid", "CycleTimeout", "DegenerateDenominator", "EppError", "InsufficientSamples",
    "InvalidState", "NonPositiveParam", "OverdampedParam", "QuadratureNotConverged",
    "SolverDiverged", "StepTooLarge", "OscillatorParams", "validate_params",
]
