"""Predefined-time robust controller and the sliding-manifold reduction.

The inner law drives the reduced dynamics ``s' = u + Delta`` with

    u = -1/((1 - rho2) rho1) * kappa(|s|)^rho2 / kappa'(|s|) * s/|s|
        - rho3 * s / (|s| + rho4)

Solutions enter the ball of radius ``delta rho4 / (rho3 - delta)`` no later
than ``t = rho1``; with ``rho4 = 0`` they reach ``s = 0`` by then.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DegeneracyError, InfeasibleGainError, RankDeficiencyError
from .kappa import K1Function
from .systems import DisturbanceSignal

__all__ = [
    "ControllerParams",
    "ManifoldSpec",
    "radial_gain",
    "inner_control_u",
    "outer_control_v",
    "ultimate_bound",
    "check_gain",
    "closed_loop_rhs",
]

_RANK_TOL = 1e-9


@dataclass(frozen=True)
class ControllerParams:
    """rho1 is the predefined time T_c, rho2 the exponent p, rho3 the robust
    gain and rho4 the smoothing radius (0 gives the discontinuous law)."""

    rho1: float
    rho2: float
    rho3: float
    rho4: float
    kappa: K1Function

    def __post_init__(self):
        if not self.rho1 > 0:
            raise ConfigurationError("controller requires rho1 > 0")
        if not 0.0 <= self.rho2 < 1.0:
            raise ConfigurationError("controller requires 0 <= rho2 < 1")
        if not self.rho3 >= 0:
            raise ConfigurationError("controller requires rho3 >= 0")
        if not self.rho4 >= 0:
            raise ConfigurationError("controller requires rho4 >= 0")

    @property
    def tc(self) -> float:
        return self.rho1

    @property
    def continuous(self) -> bool:
        return self.rho4 > 0


def check_gain(params: ControllerParams, delta: float) -> None:
    """Raise InfeasibleGainError unless rho3 > delta."""
    if not params.rho3 > delta:
        raise InfeasibleGainError(
            f"controller requires rho3 > delta (rho3 = {params.rho3!r}, delta = {delta!r})")


def radial_gain(norm: float, params: ControllerParams) -> float:
    """kappa(norm)^p / ((1 - p) T_c kappa'(norm)), with the 1/inf = 0 convention."""
    if norm == 0.0:
        return 0.0
    dk = params.kappa.derivative(norm)
    if dk == 0.0:
        raise DegeneracyError(f"kappa'({norm!r}) = 0; the controller gain is unbounded")
    if math.isinf(dk):
        return 0.0
    num = 1.0 if params.rho2 == 0.0 else params.kappa.evaluate(norm) ** params.rho2
    return num / ((1.0 - params.rho2) * params.rho1 * dk)


def inner_control_u(s, params: ControllerParams) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    n = math.sqrt(float(np.dot(s, s)))
    if n == 0.0:
        return np.zeros_like(s)
    g = radial_gain(n, params)
    return -(g / n + params.rho3 / (n + params.rho4)) * s


def ultimate_bound(params: ControllerParams, delta: float) -> float:
    """b = delta rho4 / (rho3 - delta)."""
    if not delta >= 0:
        raise ConfigurationError("delta must be >= 0")
    check_gain(params, delta)
    if params.rho4 == 0.0:
        return 0.0
    return delta * params.rho4 / (params.rho3 - delta)


def closed_loop_rhs(params: ControllerParams, dist: DisturbanceSignal) -> Callable[[np.ndarray, float], np.ndarray]:
    """Right-hand side of s' = u(s) + Delta(s, t) for the integrator."""
    check_gain(params, dist.bound)

    def rhs(s: np.ndarray, t: float) -> np.ndarray:
        return inner_control_u(s, params) + dist(s, t)

    return rhs


@dataclass(frozen=True)
class ManifoldSpec:
    """s(x, t), its Jacobian G = ds/dx and the partial ds/dt."""

    s: Callable[[np.ndarray, float], np.ndarray]
    G: Callable[[np.ndarray, float], np.ndarray]
    ds_dt: Callable[[np.ndarray, float], np.ndarray]


def outer_control_v(x, t: float, manifold: ManifoldSpec, f_of_x, B_of_x, u) -> np.ndarray:
    """Input v that turns x' = f + B v + delta into s' = u + G delta.

    Solves (G B) v = u - G f - ds/dt. Raises RankDeficiencyError when the
    smallest singular value of G B is below 1e-9.
    """
    x = np.asarray(x, dtype=float)
    G = np.atleast_2d(np.asarray(manifold.G(x, t), dtype=float))
    B = np.atleast_2d(np.asarray(B_of_x(x), dtype=float))
    GB = G @ B
    sv = np.linalg.svd(GB, compute_uv=False)
    if GB.shape[0] != GB.shape[1] or sv[-1] <= _RANK_TOL:
        smallest = float(sv[-1]) if sv.size else 0.0
        cond = float(sv[0] / smallest) if smallest > 0 else math.inf
        raise RankDeficiencyError(
            f"G(x,t) B(x) is rank deficient (smallest singular value {smallest:.3e}, condition {cond:.3e})",
            smallest, cond)
    rhs = np.asarray(u, dtype=float) - G @ np.asarray(f_of_x(x), dtype=float) \
        - np.asarray(manifold.ds_dt(x, t), dtype=float)
    return np.linalg.solve(GB, rhs)
