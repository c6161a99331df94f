"""Post-hoc verification of simulated trajectories.

Exact convergence cannot be observed in floating point, so "the state is
zero from time T on" is replaced by "the norm stays inside an epsilon ball
from T until the end of the record, and the record extends at least
``dwell`` seconds past T".
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, CoverageError, DegeneracyError
from .kappa import K1Function
from .sim import IntegrationConfig, Trajectory, integrate
from .systems import SystemModel

__all__ = [
    "SettlingReport",
    "EnvelopeCheck",
    "UltimateBoundVerdict",
    "SweepRow",
    "SweepTable",
    "settling_time",
    "theorem1_envelope",
    "lyapunov_bound",
    "lyapunov_margin",
    "envelope_dominance",
    "ultimate_bound_check",
    "settling_bound_sweep",
]


@dataclass(frozen=True)
class SettlingReport:
    """``settling_time`` is None when the trajectory never settles."""

    settling_time: float | None
    epsilon: float
    dwell: float
    bound_claimed: float = math.inf
    satisfied: bool = False

    @property
    def settled(self) -> bool:
        return self.settling_time is not None

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.settling_time is None:
            d["settling_time"] = "not settled"
        if math.isinf(self.bound_claimed):
            d["bound_claimed"] = None
        return d


@dataclass(frozen=True)
class EnvelopeCheck:
    """Result of a sampled inequality check; ``passed`` iff violation <= tolerance."""

    max_violation: float
    tolerance: float
    passed: bool
    worst_time: float | None = None
    samples_checked: int = 0
    kind: str = "envelope"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class UltimateBoundVerdict:
    passed: bool
    first_violation_time: float | None
    max_norm_after: float
    b: float
    slack: float
    tc: float

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return asdict(self)


def settling_time(traj: Trajectory, epsilon: float, dwell: float = 0.05,
                  bound_claimed: float = math.inf) -> SettlingReport:
    """Earliest sample time after which every recorded norm is <= epsilon.

    The run must continue for at least ``dwell`` seconds past that time,
    otherwise the report says "not settled".
    """
    if not epsilon > 0:
        raise ConfigurationError("settling_time requires epsilon > 0")
    if not dwell > 0:
        raise ConfigurationError("settling_time requires dwell > 0")
    if len(traj) == 0:
        raise CoverageError("settling_time needs a nonempty trajectory")
    outside = np.nonzero(traj.norms > epsilon)[0]
    idx = 0 if outside.size == 0 else int(outside[-1]) + 1
    if idx >= len(traj) or traj.t_end - traj.times[idx] < dwell - 1e-12:
        return SettlingReport(None, epsilon, dwell, bound_claimed, False)
    tau = float(traj.times[idx])
    return SettlingReport(tau, epsilon, dwell, bound_claimed, tau <= bound_claimed)


def theorem1_envelope(t, kappa_V0: float, p: float, tc: float):
    """Comparison-lemma envelope for kappa(V(t)).

    ``[kappa_V0^(1-p) - t/tc]^(1/(1-p))`` until it reaches zero, then 0.
    Accepts a scalar or an array of times.
    """
    if not 0.0 <= kappa_V0 < 1.0:
        raise ConfigurationError("theorem1_envelope requires 0 <= kappa(V0) < 1")
    if not 0.0 <= p < 1.0:
        raise ConfigurationError("theorem1_envelope requires 0 <= p < 1")
    if not tc > 0:
        raise ConfigurationError("theorem1_envelope requires tc > 0")
    e = 1.0 - p
    t = np.asarray(t, dtype=float)
    t_hit = tc * kappa_V0 ** e
    base = np.maximum(kappa_V0 ** e - t / tc, 0.0)
    # exact zero from the hitting time on, regardless of rounding in base
    out = np.where(t < t_hit, base ** (1.0 / e), 0.0)
    return float(out) if out.ndim == 0 else out


def lyapunov_bound(v: float, kappa: K1Function, p: float, tc: float) -> float:
    """Right-hand side -kappa(v)^p / ((1-p) tc kappa'(v)) of the decay inequality."""
    if v == 0.0:
        return 0.0
    dk = kappa.derivative(v)
    if dk == 0.0:
        raise DegeneracyError(f"kappa'({v!r}) = 0 along the trajectory")
    if math.isinf(dk):
        return 0.0
    num = 1.0 if p == 0.0 else kappa.evaluate(v) ** p
    return -num / ((1.0 - p) * tc * dk)


def _values(traj: Trajectory, V: Callable | None) -> np.ndarray:
    if V is None:
        return np.asarray(traj.norms, dtype=float)
    return np.array([float(V(row if traj.dim > 1 else row[0])) for row in traj.states])


def lyapunov_margin(traj: Trajectory, kappa: K1Function, p: float, tc: float, mu: float = 0.0,
                    V: Callable | None = None, tolerance: float | None = None,
                    resolution: float = 0.01) -> EnvelopeCheck:
    """Check the sampled decay inequality dV/dt <= -kappa(V)^p / ((1-p) tc kappa'(V)).

    dV/dt is the forward difference between consecutive samples, taken only
    where ``||x_k|| >= mu``, ``V_k > 0`` and the sample is resolved, meaning
    ``|V_k+1 - V_k| <= resolution * V_k``. Unresolved samples are the last
    one or two Euler steps before the origin, where a single step is
    comparable to V and the difference quotient says nothing about the
    derivative. Violations are measured relative to ``max(1, |bound|)``.
    ``V`` defaults to the Euclidean norm.

    The default tolerance is ten times the largest relative change of the
    bound across one sample interval (a local Lipschitz estimate scaled by
    the step), floored at 1e-9.
    """
    if len(traj) < 2:
        raise CoverageError("lyapunov_margin needs at least two samples")
    v = _values(traj, V)
    dt = np.diff(traj.times)
    dvdt = np.diff(v) / dt
    dv = np.abs(np.diff(v))
    mask = (traj.norms[:-1] >= mu) & (v[:-1] > 0.0) & (dv <= resolution * v[:-1])
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        tol = 1e-9 if tolerance is None else tolerance
        return EnvelopeCheck(0.0, tol, True, None, 0, "lyapunov")

    bound = np.array([lyapunov_bound(float(v[k]), kappa, p, tc) for k in idx])
    scale = np.maximum(1.0, np.abs(bound))
    rel = (dvdt[idx] - bound) / scale

    if tolerance is None:
        tolerance = 1e-9
        if idx.size > 1:
            # adjacent masked samples only
            adj = np.diff(idx) == 1
            if adj.any():
                change = np.abs(np.diff(bound))[adj] / scale[:-1][adj]
                tolerance = max(1e-9, 10.0 * float(change.max()))
    worst = int(np.argmax(rel))
    max_violation = float(rel[worst])
    return EnvelopeCheck(max_violation, float(tolerance), max_violation <= tolerance,
                         float(traj.times[idx[worst]]), int(idx.size), "lyapunov")


def envelope_dominance(traj: Trajectory, kappa: K1Function, p: float, tc: float, mu: float = 0.0,
                       V: Callable | None = None, tolerance: float | None = None) -> EnvelopeCheck:
    """Check kappa(V(t)) <= max(envelope(t), kappa(mu)) + tolerance at every sample.

    With mu = 0 this is the plain comparison-lemma statement. A positive mu
    accounts for trajectories that are only ultimately bounded: once inside
    the ball the envelope no longer applies. The default tolerance is ten
    envelope slopes at p = 0 per sample interval, 10 * step / ((1-p) tc).
    """
    v = _values(traj, V)
    w = np.array([kappa.evaluate(float(x)) for x in v])
    env = theorem1_envelope(traj.times, float(w[0]), p, tc)
    floor = kappa.evaluate(mu) if mu > 0 else 0.0
    excess = w - np.maximum(env, floor)
    if tolerance is None:
        step = float(traj.metadata.get("step", np.min(np.diff(traj.times)) if len(traj) > 1 else 0.0))
        tolerance = max(1e-12, 10.0 * step / ((1.0 - p) * tc))
    worst = int(np.argmax(excess))
    mv = float(excess[worst])
    return EnvelopeCheck(mv, float(tolerance), mv <= tolerance, float(traj.times[worst]), len(traj), "envelope")


def ultimate_bound_check(traj: Trajectory, b: float, tc: float, slack: float = 0.0) -> UltimateBoundVerdict:
    """True iff ||x(t)|| <= b + slack for every sample with t >= tc."""
    if not (b >= 0 and slack >= 0 and tc > 0):
        raise ConfigurationError("ultimate_bound_check requires b >= 0, slack >= 0, tc > 0")
    if not traj.t_end > tc:
        raise CoverageError(f"trajectory ends at t = {traj.t_end!r}, which does not extend past tc = {tc!r}")
    after = traj.times >= tc - 1e-12
    norms = traj.norms[after]
    bad = np.nonzero(norms > b + slack)[0]
    first = float(traj.times[after][bad[0]]) if bad.size else None
    return UltimateBoundVerdict(bad.size == 0, first, float(norms.max()), b, slack, tc)


# ---------------------------------------------------------------------------
# settling-time sweeps over the scalar benchmarks

@dataclass(frozen=True)
class SweepRow:
    params: object
    x0: float
    settling_time: float | None
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.settling_time is not None and self.settling_time <= self.bound


@dataclass
class SweepTable:
    system: str
    epsilon: float
    dwell: float
    rows: list[SweepRow] = field(default_factory=list)

    def all_within_bound(self, margin: float = 0.0) -> bool:
        return all(r.settling_time is not None and r.settling_time <= r.bound + margin for r in self.rows)

    @property
    def min_time(self) -> float:
        """Smallest measured settling time over the whole grid."""
        times = [r.settling_time for r in self.rows if r.settling_time is not None]
        return min(times) if times else math.nan

    @property
    def sup_floor(self) -> float:
        """min over parameter sets of the max over initial conditions.

        This estimates the infimum over gains of sup over x0 of T(x0).
        """
        worst: dict[int, float] = {}
        for r in self.rows:
            t = math.inf if r.settling_time is None else r.settling_time
            key = id(r.params)
            worst[key] = max(worst.get(key, -math.inf), t)
        return min(worst.values()) if worst else math.nan

    def __len__(self) -> int:
        return len(self.rows)


def settling_bound_sweep(system: str, param_grid: Sequence, x0_grid: Iterable[float],
                         epsilon: float = 1e-4, dwell: float = 0.05, step: float = 1e-5,
                         step_guard: bool = True) -> SweepTable:
    """Measure settling times of a scalar benchmark over a parameter grid.

    Each run stops once the state has stayed in the epsilon ball for
    ``dwell`` seconds, or at ``bound + dwell + 0.1`` seconds.
    """
    x0s = list(x0_grid)
    if not param_grid or not x0s:
        raise ConfigurationError("settling_bound_sweep requires nonempty grids")
    table = SweepTable(system, epsilon, dwell)
    for params in param_grid:
        model = SystemModel(system, params)
        bound = model.settling_bound()
        cfg = IntegrationConfig(step=step, t_end=bound + dwell + 0.1, step_guard=step_guard,
                                halt_radius=epsilon, halt_dwell=dwell)
        for x0 in x0s:
            traj = integrate(model.rhs, float(x0), cfg)
            rep = settling_time(traj, epsilon, dwell, bound)
            table.rows.append(SweepRow(params, float(x0), rep.settling_time, bound))
    return table
