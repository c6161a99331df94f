"""Numerical toolkit for predefined-time stability.

Modules
-------
specfun   Gamma, Beta and the regularized incomplete Gamma/Beta functions
kappa     class-K1 function families
systems   scalar benchmark systems, disturbances, signed powers
control   robust predefined-time controller and manifold reduction
sim       fixed-step integrator with dead-band and step-guard policies
analysis  settling time, comparison envelope, Lyapunov margin, ultimate bound
scenario  scenario file format and bundled presets
runner    scenario execution, CSV and summary output
cli       command-line entry point
"""
from .analysis import (
    EnvelopeCheck,
    SettlingReport,
    envelope_dominance,
    lyapunov_margin,
    settling_bound_sweep,
    settling_time,
    theorem1_envelope,
    ultimate_bound_check,
)
from .control import ControllerParams, closed_loop_rhs, inner_control_u, outer_control_v, ultimate_bound
from .kappa import K1Function, make_k1
from .sim import IntegrationConfig, Trajectory, integrate, integrate_batch
from .systems import FixedTimeParams, PredefinedParams, SystemModel, pred_param_preset

__version__ = "0.1.0"

__all__ = [
    "EnvelopeCheck",
    "SettlingReport",
    "envelope_dominance",
    "lyapunov_margin",
    "settling_bound_sweep",
    "settling_time",
    "theorem1_envelope",
    "ultimate_bound_check",
    "ControllerParams",
    "closed_loop_rhs",
    "inner_control_u",
    "outer_control_v",
    "ultimate_bound",
    "K1Function",
    "make_k1",
    "IntegrationConfig",
    "Trajectory",
    "integrate",
    "integrate_batch",
    "FixedTimeParams",
    "PredefinedParams",
    "SystemModel",
    "pred_param_preset",
]
