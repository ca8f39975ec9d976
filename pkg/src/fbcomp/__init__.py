"""Numerical laboratory for a two-species competition system with free boundaries.

Computes the spreading-speed constants of the weak-strong competition model
(the coupled semi-wave speed for the superior competitor, the scalar
semi-wave speed for the inferior one, and the critical radius), simulates
the free-boundary dynamics with a front-fixing scheme, and verifies the
predicted two-speed spreading, mass segregation, and vanishing/spreading
trichotomy.
"""

__version__ = "0.1.0"

from .errors import (BracketFailure, ConditionViolated, DomainTooSmall,
                     EmptyBand, FbcompError, InvalidSpec, InvalidState,
                     NonConvergence, PresetUnreachable, StabilityFailure,
                     WindowTooShort)
from .model import InitialData, ModelParams, NumericsConfig, SimState
from .semiwave import (compute_R_star, compute_c_star, compute_s_star,
                       estimate_c0, solve_coupled_semiwave,
                       solve_scalar_semiwave)
from .simulate import Trajectory, run_P, run_Q, step
from .diagnostics import (Outcome, SegregationMetrics, SpeedReport,
                          TrichotomyThresholds, check_region_B,
                          classify_outcome, fit_front_speed,
                          segregation_metrics, trichotomy_thresholds)
from .scenarios import (ScenarioSpec, build_corollary1_data, build_Q_data,
                        build_trichotomy_preset, get_preset, PRESET_NAMES,
                        validate_regime)
from .config import RunConfig

__all__ = [
    "__version__",
    "FbcompError", "InvalidSpec", "InvalidState", "NonConvergence",
    "BracketFailure", "StabilityFailure", "DomainTooSmall", "WindowTooShort",
    "EmptyBand", "ConditionViolated", "PresetUnreachable",
    "ModelParams", "InitialData", "NumericsConfig", "SimState",
    "compute_R_star", "compute_c_star", "compute_s_star", "estimate_c0",
    "solve_scalar_semiwave", "solve_coupled_semiwave",
    "Trajectory", "run_P", "run_Q", "step",
    "SpeedReport", "SegregationMetrics", "Outcome", "TrichotomyThresholds",
    "fit_front_speed", "segregation_metrics", "classify_outcome",
    "check_region_B", "trichotomy_thresholds",
    "ScenarioSpec", "build_corollary1_data", "build_Q_data",
    "build_trichotomy_preset", "validate_regime", "get_preset",
    "PRESET_NAMES",
    "RunConfig",
]
