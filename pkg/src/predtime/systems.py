"""Benchmark vector fields, signed powers and disturbance signals.

Conventions
-----------
``sign(0) = 0``, so ``signed_pow_scalar(0, 0) == 0`` and the unit vector of the
zero vector is the zero vector. This is the discrete stand-in for the
Filippov equilibrium: the discontinuous terms vanish exactly at the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun
from .errors import ConfigurationError, DisturbanceBoundError, DomainError

__all__ = [
    "signed_pow_scalar",
    "signed_pow_vector",
    "FixedTimeParams",
    "PredefinedParams",
    "fixnopred_rhs",
    "fixnopred_settling_bound",
    "pred_rhs",
    "pred_param_preset",
    "pred_preset_settling_bound",
    "DisturbanceSignal",
    "circle_reference",
    "tracking_disturbance",
    "reduced_rhs",
    "SystemModel",
]


def signed_pow_scalar(x: float, h: float) -> float:
    """|x|^h sign(x); zero at the origin for h >= 0."""
    if x == 0.0:
        if h < 0.0:
            raise DomainError("signed power with negative exponent is undefined at 0")
        return 0.0
    return math.copysign(abs(x) ** h, x)


def signed_pow_vector(x, h: float) -> np.ndarray:
    """x / ||x||^(1 - h); the zero vector maps to itself for h >= 0."""
    x = np.asarray(x, dtype=float)
    n = float(np.linalg.norm(x))
    if n == 0.0:
        if h < 0.0:
            raise DomainError("signed power with negative exponent is undefined at 0")
        return np.zeros_like(x)
    return x * n ** (h - 1.0)


# ---------------------------------------------------------------------------
# scalar benchmark systems

@dataclass(frozen=True)
class FixedTimeParams:
    """Parameters of  x' = -(1/rho1)|x|^rho2 sign x - rho1 |x|^(2 - rho2) sign x."""

    rho1: float
    rho2: float

    def __post_init__(self):
        if not self.rho1 > 0:
            raise ConfigurationError("fixed-time system requires rho1 > 0")
        if not 0.0 < self.rho2 < 1.0:
            raise ConfigurationError("fixed-time system requires 0 < rho2 < 1")


@dataclass(frozen=True)
class PredefinedParams:
    """Parameters of  x' = -sig(rho1 sig(x)^rho3 + rho2 sig(x)^rho4)^rho5."""

    rho1: float
    rho2: float
    rho3: float
    rho4: float
    rho5: float

    def __post_init__(self):
        for name in ("rho1", "rho2", "rho5"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"predefined-time system requires {name} > 0")
        if not 0.0 < self.rho5 * self.rho3 < 1.0:
            raise ConfigurationError("predefined-time system requires 0 < rho5*rho3 < 1")
        if not self.rho5 * self.rho4 > 1.0:
            raise ConfigurationError("predefined-time system requires rho5*rho4 > 1")


def fixnopred_rhs(x: float, rho: FixedTimeParams) -> float:
    return (-signed_pow_scalar(x, rho.rho2) / rho.rho1
            - rho.rho1 * signed_pow_scalar(x, 2.0 - rho.rho2))


def fixnopred_settling_bound(rho: FixedTimeParams) -> float:
    """Supremum of the settling time, pi / (2 (1 - rho2)); independent of rho1."""
    return math.pi / (2.0 * (1.0 - rho.rho2))


def pred_rhs(x: float, rho: PredefinedParams) -> float:
    inner = rho.rho1 * signed_pow_scalar(x, rho.rho3) + rho.rho2 * signed_pow_scalar(x, rho.rho4)
    return -signed_pow_scalar(inner, rho.rho5)


def pred_param_preset(tc: float) -> PredefinedParams:
    """Gains giving a settling-time supremum of exactly ``tc``.

    rho1 = rho2 = Gamma(1/4)^4 / (4 pi tc^2), rho3 = 1, rho4 = 3, rho5 = 1/2.
    """
    if not tc > 0:
        raise ConfigurationError("predefined time tc must be > 0")
    gain = specfun.gamma_fn(0.25) ** 4 / (4.0 * math.pi * tc * tc)
    return PredefinedParams(gain, gain, 1.0, 3.0, 0.5)


def pred_preset_settling_bound(rho: PredefinedParams) -> float:
    """Settling-time supremum Gamma(1/4)^2 / (rho1^(1/2) Gamma(1/2) (3 - 1)).

    Only defined for the preset shape (rho1 = rho2, rho3 = 1, rho4 = 3,
    rho5 = 1/2); other exponent choices have no closed form here.
    """
    if not (rho.rho1 == rho.rho2 and rho.rho3 == 1.0 and rho.rho4 == 3.0 and rho.rho5 == 0.5):
        raise ConfigurationError("settling bound is only available for the preset shape "
                                 "(rho1 = rho2, rho3 = 1, rho4 = 3, rho5 = 1/2)")
    g14 = specfun.gamma_fn(0.25)
    return g14 * g14 / (math.sqrt(rho.rho1) * specfun.gamma_fn(0.5) * (3.0 - 1.0))


# ---------------------------------------------------------------------------
# disturbances and the reduced sliding dynamics

@dataclass(frozen=True)
class DisturbanceSignal:
    """Delta(x, t) with a declared bound ||Delta|| <= bound.

    ``fn`` must be a pure function of (state, time). Every call is checked
    against the bound (with a 1e-12 relative allowance for rounding).
    """

    fn: Callable[[np.ndarray, float], np.ndarray]
    bound: float
    name: str = "disturbance"

    def __post_init__(self):
        if not self.bound >= 0:
            raise ConfigurationError("disturbance bound must be >= 0")

    def __call__(self, x, t: float) -> np.ndarray:
        d = np.asarray(self.fn(x, t), dtype=float)
        mag = float(np.linalg.norm(d))
        if mag > self.bound * (1.0 + 1e-12) + 1e-300:
            raise DisturbanceBoundError(
                f"{self.name}: ||Delta|| = {mag!r} exceeds declared bound {self.bound!r} at t = {t!r}")
        return d


def zero_disturbance(dim: int) -> DisturbanceSignal:
    zero = np.zeros(dim)
    return DisturbanceSignal(lambda x, t: zero, 0.0, name="zero")


def circle_reference(radius: float = 1.0, omega: float = 2.0 * math.pi):
    """Reference r(t) = radius [cos wt, sin wt] and its derivative."""

    def r(t: float) -> np.ndarray:
        return np.array([radius * math.cos(omega * t), radius * math.sin(omega * t)])

    def r_dot(t: float) -> np.ndarray:
        return np.array([-radius * omega * math.sin(omega * t), radius * omega * math.cos(omega * t)])

    return r, r_dot


def tracking_disturbance(radius: float = 1.0, omega: float = 2.0 * math.pi) -> DisturbanceSignal:
    """Delta(t) = -r'(t) for the circular reference; bound radius * omega."""
    _, r_dot = circle_reference(radius, omega)
    return DisturbanceSignal(lambda x, t: -r_dot(t), abs(radius * omega), name="circle-tracking")


def reduced_rhs(s, u, dist: DisturbanceSignal, x_context, t: float) -> np.ndarray:
    """s' = u + Delta(x, t)."""
    s = np.asarray(s, dtype=float)
    u = np.asarray(u, dtype=float)
    if s.shape != u.shape:
        raise DomainError(f"dimension mismatch: s has shape {s.shape}, u has shape {u.shape}")
    d = dist(x_context, t)
    if d.shape != s.shape:
        raise DomainError(f"dimension mismatch: Delta has shape {d.shape}, s has shape {s.shape}")
    return u + d


@dataclass(frozen=True)
class SystemModel:
    """A named autonomous scalar field with its parameters."""

    name: str
    params: FixedTimeParams | PredefinedParams

    @classmethod
    def fixnopred(cls, rho: FixedTimeParams) -> "SystemModel":
        return cls("fixnopred", rho)

    @classmethod
    def pred(cls, rho: PredefinedParams) -> "SystemModel":
        return cls("pred", rho)

    def __post_init__(self):
        expected = {"fixnopred": FixedTimeParams, "pred": PredefinedParams}.get(self.name)
        if expected is None:
            raise ConfigurationError(f"unknown system {self.name!r}")
        if not isinstance(self.params, expected):
            raise ConfigurationError(f"system {self.name!r} needs {expected.__name__}")

    def rhs(self, x: float, t: float = 0.0) -> float:
        if self.name == "fixnopred":
            return fixnopred_rhs(x, self.params)
        return pred_rhs(x, self.params)

    def settling_bound(self) -> float:
        if isinstance(self.params, FixedTimeParams):
            return fixnopred_settling_bound(self.params)
        return pred_preset_settling_bound(self.params)
