"""Class-K1 functions: continuous, strictly increasing maps [0, inf) -> [0, 1).

Every family exposes ``evaluate``, an analytic ``derivative``, ``inverse`` and
``log_complement`` (log(1 - kappa)). The last one is how strict monotonicity
and ``kappa < 1`` stay observable once ``evaluate`` has rounded to 1.0.

Derivatives that diverge at the origin return ``math.inf``; callers that
divide by the derivative treat that as a zero quotient.
"""
from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from typing import Callable

from . import specfun
from .errors import ConfigurationError, DomainError

__all__ = [
    "Family",
    "K1Function",
    "ExpNeg",
    "Arctan",
    "Rational",
    "RegGamma",
    "RegBetaRational",
    "GammaForm",
    "ExpPowForm",
    "BetaForm",
    "Composed",
    "KInfFunction",
    "make_k1",
    "compose_k1_kinf",
    "inverse_compose",
    "kinf_linear",
    "kinf_power",
]

_TWO_OVER_PI = 2.0 / math.pi


class Family(str, enum.Enum):
    EXP_NEG = "exp_neg"
    ARCTAN = "arctan"
    RATIONAL = "rational"
    REG_GAMMA = "reg_gamma"
    REG_BETA_RATIONAL = "reg_beta_rational"
    GAMMA_FORM = "gamma_form"
    EXP_POW_FORM = "exp_pow_form"
    BETA_FORM = "beta_form"
    COMPOSED = "composed"


def _check_r(r: float) -> float:
    r = float(r)
    if not r >= 0.0:
        raise DomainError(f"kappa is defined on r >= 0, got {r!r}")
    return r


def _check_y(y: float) -> float:
    y = float(y)
    if not 0.0 <= y < 1.0:
        raise DomainError(f"kappa inverse needs y in [0, 1), got {y!r}")
    return y


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigurationError(message)


class K1Function(ABC):
    """Base class; subclasses are frozen dataclasses holding the parameters."""

    family: Family

    def __call__(self, r: float) -> float:
        return self.evaluate(r)

    @property
    def params(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}  # type: ignore[arg-type]

    def evaluate(self, r: float) -> float:
        r = _check_r(r)
        if r == 0.0:
            return 0.0
        if math.isinf(r):
            return 1.0
        return self._value(r)

    def derivative(self, r: float) -> float:
        """d kappa / dr; ``math.inf`` where it diverges (only ever at r = 0)."""
        r = _check_r(r)
        return self._derivative(r)

    def inverse(self, y: float) -> float:
        y = _check_y(y)
        if y == 0.0:
            return 0.0
        return self._inverse(y)

    def log_complement(self, r: float) -> float:
        """log(1 - kappa(r)), finite for every finite r."""
        r = _check_r(r)
        if r == 0.0:
            return 0.0
        return self._log_complement(r)

    def inverse_log_complement(self, lc: float) -> float:
        """r with log(1 - kappa(r)) = lc, for lc <= 0.

        Reaches the tail where kappa itself has rounded to 1.0. Falls back to
        the ordinary inverse while 1 - e^lc is representable without loss.
        """
        if not lc <= 0.0:
            raise DomainError(f"log(1 - kappa) must be <= 0, got {lc!r}")
        if lc == 0.0:
            return 0.0
        if lc > -0.5:
            return self.inverse(-math.expm1(lc))
        # geometric bracket, then bisection on the decreasing log complement
        lo, hi = 0.0, 1.0
        while self.log_complement(hi) > lc:
            lo, hi = hi, 2.0 * hi
            if math.isinf(hi):
                return math.inf
        for _ in range(400):
            mid = 0.5 * hi if lo == 0.0 else math.sqrt(lo * hi)
            if self.log_complement(mid) > lc:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * hi:
                break
        return 0.5 * (lo + hi)

    @abstractmethod
    def _value(self, r: float) -> float: ...

    @abstractmethod
    def _derivative(self, r: float) -> float: ...

    @abstractmethod
    def _inverse(self, y: float) -> float: ...

    @abstractmethod
    def _log_complement(self, r: float) -> float: ...


@dataclass(frozen=True)
class ExpNeg(K1Function):
    """kappa(r) = 1 - exp(-r)."""

    family = Family.EXP_NEG

    def _value(self, r):
        return -math.expm1(-r)

    def _derivative(self, r):
        return math.exp(-r)

    def _inverse(self, y):
        return -math.log1p(-y)

    def _log_complement(self, r):
        return -r


@dataclass(frozen=True)
class Arctan(K1Function):
    """kappa(r) = (2/pi) arctan(r)."""

    family = Family.ARCTAN

    def _value(self, r):
        return _TWO_OVER_PI * math.atan(r)

    def _derivative(self, r):
        return _TWO_OVER_PI / (1.0 + r * r)

    def _inverse(self, y):
        return math.tan(0.5 * math.pi * y)

    def _log_complement(self, r):
        if r <= 1.0:
            return math.log1p(-_TWO_OVER_PI * math.atan(r))
        # 1 - (2/pi) atan(r) = (2/pi) atan(1/r) for r > 0
        return math.log(_TWO_OVER_PI * math.atan(1.0 / r))


@dataclass(frozen=True)
class Rational(K1Function):
    """kappa(r) = r / (r + alpha)."""

    alpha: float = 1.0
    family = Family.RATIONAL

    def __post_init__(self):
        _require(self.alpha > 0, "Rational requires alpha > 0")

    def _value(self, r):
        return r / (r + self.alpha)

    def _derivative(self, r):
        return self.alpha / (r + self.alpha) ** 2

    def _inverse(self, y):
        return self.alpha * y / (1.0 - y)

    def _log_complement(self, r):
        return math.log(self.alpha) - math.log(r + self.alpha)


@dataclass(frozen=True)
class RegGamma(K1Function):
    """kappa(r) = P(alpha, r)."""

    alpha: float = 1.0
    family = Family.REG_GAMMA

    def __post_init__(self):
        _require(self.alpha > 0, "RegGamma requires alpha > 0")

    def _value(self, r):
        return specfun.reg_inc_gamma(self.alpha, r)

    def _derivative(self, r):
        a = self.alpha
        if r == 0.0:
            return math.inf if a < 1.0 else (1.0 if a == 1.0 else 0.0)
        return math.exp((a - 1.0) * math.log(r) - r - specfun.log_gamma(a))

    def _inverse(self, y):
        return specfun.inv_reg_inc_gamma(self.alpha, y)

    def _log_complement(self, r):
        return specfun.log_reg_inc_gamma_upper(self.alpha, r)


@dataclass(frozen=True)
class RegBetaRational(K1Function):
    """kappa(r) = I(alpha, beta, r / (r + 1))."""

    alpha: float = 1.0
    beta: float = 1.0
    family = Family.REG_BETA_RATIONAL

    def __post_init__(self):
        _require(self.alpha > 0, "RegBetaRational requires alpha > 0")
        _require(self.beta > 0, "RegBetaRational requires beta > 0")

    def _value(self, r):
        return specfun.reg_inc_beta(self.alpha, self.beta, r / (r + 1.0), complement=1.0 / (r + 1.0))

    def _derivative(self, r):
        a, b = self.alpha, self.beta
        if r == 0.0:
            if a < 1.0:
                return math.inf
            return 1.0 / specfun.beta_fn(a, b) if a == 1.0 else 0.0
        # x = r/(r+1), 1-x = 1/(r+1), dx/dr = 1/(r+1)^2
        log_rp1 = math.log1p(r)
        log_x = math.log(r) - log_rp1
        return math.exp((a - 1.0) * log_x - (b - 1.0) * log_rp1 - 2.0 * log_rp1 - specfun.log_beta(a, b))

    def _inverse(self, y):
        x, w = specfun.inv_reg_inc_beta_pair(self.alpha, self.beta, y)
        return x / w

    def _log_complement(self, r):
        return specfun.log_reg_inc_beta(self.beta, self.alpha, 1.0 / (r + 1.0), complement=r / (r + 1.0))


@dataclass(frozen=True)
class GammaForm(K1Function):
    """kappa(r) = P((1 - beta q) / s, alpha r^s)."""

    alpha: float = 1.0
    beta: float = 1.0
    s: float = 0.5
    q: float = 0.5
    family = Family.GAMMA_FORM

    def __post_init__(self):
        for name in ("alpha", "beta", "s", "q"):
            _require(getattr(self, name) > 0, f"GammaForm requires {name} > 0")
        _require(self.beta * self.q < 1.0, "GammaForm requires beta*q < 1")

    @property
    def shape(self) -> float:
        return (1.0 - self.beta * self.q) / self.s

    def _value(self, r):
        return specfun.reg_inc_gamma(self.shape, self.alpha * r ** self.s)

    def _derivative(self, r):
        if r == 0.0:
            return math.inf  # behaves like r^(-beta q)
        a, s = self.shape, self.s
        z = self.alpha * r ** s
        log_dz = math.log(self.alpha * s) + (s - 1.0) * math.log(r)
        return math.exp((a - 1.0) * math.log(z) - z - specfun.log_gamma(a) + log_dz)

    def _inverse(self, y):
        z = specfun.inv_reg_inc_gamma(self.shape, y)
        return (z / self.alpha) ** (1.0 / self.s)

    def _log_complement(self, r):
        return specfun.log_reg_inc_gamma_upper(self.shape, self.alpha * r ** self.s)


@dataclass(frozen=True)
class ExpPowForm(K1Function):
    """kappa(r) = 1 - exp(-r^s), 0 < s <= 1."""

    s: float = 0.5
    family = Family.EXP_POW_FORM

    def __post_init__(self):
        _require(0.0 < self.s <= 1.0, "ExpPowForm requires 0 < s <= 1")

    def _value(self, r):
        return -math.expm1(-(r ** self.s))

    def _derivative(self, r):
        s = self.s
        if r == 0.0:
            return math.inf if s < 1.0 else 1.0
        rs = r ** s
        return s * rs / r * math.exp(-rs)

    def _inverse(self, y):
        return (-math.log1p(-y)) ** (1.0 / self.s)

    def _log_complement(self, r):
        return -(r ** self.s)


@dataclass(frozen=True)
class BetaForm(K1Function):
    """kappa(r) = I(m_s, m_q, beta r^(q-s) / (beta r^(q-s) + alpha)).

    m_s = (1 - k s)/(q - s) and m_q = (k q - 1)/(q - s); needs 0 < k s < 1 < k q.
    In the tracking example the parameters are named rho5..rho9 in the order
    alpha, beta, s, q, k.
    """

    alpha: float = 1.0
    beta: float = 1.0
    k: float = 1.0
    s: float = 0.5
    q: float = 1.5
    family = Family.BETA_FORM

    def __post_init__(self):
        for name in ("alpha", "beta", "k", "s", "q"):
            _require(getattr(self, name) > 0, f"BetaForm requires {name} > 0")
        _require(0.0 < self.k * self.s < 1.0, "BetaForm requires 0 < k*s < 1")
        _require(self.k * self.q > 1.0, "BetaForm requires k*q > 1")

    @property
    def m_s(self) -> float:
        return (1.0 - self.k * self.s) / (self.q - self.s)

    @property
    def m_q(self) -> float:
        return (self.k * self.q - 1.0) / (self.q - self.s)

    def _split(self, r: float) -> tuple[float, float]:
        # z = beta r^d/(beta r^d + alpha) and 1 - z, both without cancellation
        brd = self.beta * r ** (self.q - self.s)
        den = brd + self.alpha
        return brd / den, self.alpha / den

    def _value(self, r):
        z, w = self._split(r)
        return specfun.reg_inc_beta(self.m_s, self.m_q, z, complement=w)

    def _derivative(self, r):
        if r == 0.0:
            return math.inf  # behaves like r^(-k s)
        d = self.q - self.s
        log_r = math.log(r)
        log_brd = math.log(self.beta) + d * log_r
        log_den = _logaddexp(log_brd, math.log(self.alpha))
        log_z = log_brd - log_den
        log_w = math.log(self.alpha) - log_den
        log_dz = math.log(self.alpha * d) + log_brd - log_r - 2.0 * log_den
        return math.exp((self.m_s - 1.0) * log_z + (self.m_q - 1.0) * log_w
                        - specfun.log_beta(self.m_s, self.m_q) + log_dz)

    def _inverse(self, y):
        z, w = specfun.inv_reg_inc_beta_pair(self.m_s, self.m_q, y)
        return (self.alpha * z / (self.beta * w)) ** (1.0 / (self.q - self.s))

    def _log_complement(self, r):
        z, w = self._split(r)
        return specfun.log_reg_inc_beta(self.m_q, self.m_s, w, complement=z)


def _logaddexp(a: float, b: float) -> float:
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


# ---------------------------------------------------------------------------
# class K-infinity helpers and composition

@dataclass(frozen=True)
class KInfFunction:
    """Continuous, strictly increasing, zero at zero, unbounded.

    ``inverse`` is optional; without it a bracketing bisection is used.
    """

    fn: Callable[[float], float]
    derivative: Callable[[float], float]
    inverse_fn: Callable[[float], float] | None = None
    name: str = "alpha"

    def __call__(self, r: float) -> float:
        return self.fn(r)

    def inverse(self, v: float) -> float:
        if self.inverse_fn is not None:
            return self.inverse_fn(v)
        if v <= 0.0:
            return 0.0
        lo, hi = 0.0, 1.0
        while self.fn(hi) < v:
            lo, hi = hi, 2.0 * hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.fn(mid) < v:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * hi:
                break
        return 0.5 * (lo + hi)


def kinf_linear(c: float) -> KInfFunction:
    if not c > 0:
        raise ConfigurationError("linear K-infinity map needs c > 0")
    return KInfFunction(lambda r: c * r, lambda r: c, lambda v: v / c, name=f"{c}*r")


def kinf_power(p: float) -> KInfFunction:
    if not p > 0:
        raise ConfigurationError("power K-infinity map needs p > 0")

    def deriv(r: float) -> float:
        if r == 0.0:
            return math.inf if p < 1 else (1.0 if p == 1 else 0.0)
        return p * r ** (p - 1.0)

    return KInfFunction(lambda r: r ** p, deriv, lambda v: v ** (1.0 / p), name=f"r^{p}")


@dataclass(frozen=True)
class Composed(K1Function):
    """kappa(alpha(r)) for kappa in K1 and alpha in K-infinity."""

    outer: K1Function
    inner: KInfFunction
    family = Family.COMPOSED

    @property
    def params(self) -> dict[str, float]:
        return {"outer": self.outer.family.value, "inner": self.inner.name}  # type: ignore[dict-item]

    def _value(self, r):
        return self.outer.evaluate(self.inner(r))

    def _derivative(self, r):
        dk = self.outer.derivative(self.inner(r))
        da = self.inner.derivative(r)
        if dk == 0.0 or da == 0.0:
            return 0.0 if not (math.isinf(dk) or math.isinf(da)) else math.inf
        return dk * da

    def _inverse(self, y):
        return self.inner.inverse(self.outer.inverse(y))

    def _log_complement(self, r):
        return self.outer.log_complement(self.inner(r))


def compose_k1_kinf(k: K1Function, a: KInfFunction) -> K1Function:
    return Composed(k, a)


def inverse_compose(k1: K1Function, k2: K1Function) -> KInfFunction:
    """kappa1^-1 o kappa2, which is class K-infinity."""

    def fn(r: float) -> float:
        y = k2.evaluate(r)
        if y < 0.5:
            return k1.inverse(y)
        # the tail of k2 rounds to 1.0; go through the log complement instead
        return k1.inverse_log_complement(k2.log_complement(r))

    def deriv(r: float) -> float:
        return k2.derivative(r) / k1.derivative(fn(r))

    return KInfFunction(fn, deriv, lambda v: k2.inverse(k1.evaluate(v)),
                        name=f"{k1.family.value}^-1 o {k2.family.value}")


_REGISTRY: dict[Family, type[K1Function]] = {
    Family.EXP_NEG: ExpNeg,
    Family.ARCTAN: Arctan,
    Family.RATIONAL: Rational,
    Family.REG_GAMMA: RegGamma,
    Family.REG_BETA_RATIONAL: RegBetaRational,
    Family.GAMMA_FORM: GammaForm,
    Family.EXP_POW_FORM: ExpPowForm,
    Family.BETA_FORM: BetaForm,
}


def make_k1(family: Family | str, **params: float) -> K1Function:
    """Build a built-in family by name, e.g. ``make_k1("beta_form", s=0.9, q=1.1)``.

    Unknown parameter names and constraint violations raise
    ConfigurationError.
    """
    try:
        fam = Family(family)
    except ValueError:
        raise ConfigurationError(f"unknown kappa family {family!r}") from None
    if fam not in _REGISTRY:
        raise ConfigurationError(f"family {fam.value!r} cannot be built by name")
    cls = _REGISTRY[fam]
    allowed = {f.name for f in fields(cls)}
    unknown = set(params) - allowed
    if unknown:
        raise ConfigurationError(
            f"{cls.__name__} got unknown parameter(s) {sorted(unknown)}; allowed: {sorted(allowed)}")
    return cls(**{k: float(v) for k, v in params.items()})


def family_names() -> list[str]:
    return [f.value for f in _REGISTRY]
