"""Fixed-step integration of possibly discontinuous closed loops.

Forward Euler is the reference method. Three policies sit on top of it:

* **dead-band clamp** (``clamp_enabled``): for closed loops declared to
  converge exactly, the state is set to zero for good once a step lands in
  the ball ``||x|| <= deadband_radius`` or carries the state through the
  origin (``<x_k, x_k+1> <= 0`` with ``||x_k+1|| <= ||x_k||``). Explicit
  Euler cannot represent the sliding motion itself, and with a unit-vector
  term it chatters at amplitude ~ step * ||u||, which almost never lands in
  a 1e-6 ball in two or more dimensions.
* **step guard** (``step_guard``): a fundamental step is split into substeps
  while ``||rhs|| * dt > guard_ratio * ||x||`` and ``||x|| > guard_min_norm``.
  The recorded grid stays uniform; the substep count is reported in
  ``metadata["step_guard_substeps"]``.
* **early halt** (``halt_radius``): stop once the norm has stayed inside
  ``halt_radius`` for ``halt_dwell`` seconds.

Scalar initial conditions (Python or numpy scalars) select a float fast
path whose ``rhs`` takes and returns floats. Array initial conditions use
``rhs(x: ndarray, t) -> ndarray``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import ConfigurationError, DivergenceError, PredtimeError

__all__ = ["IntegrationConfig", "Trajectory", "SimJob", "integrate", "integrate_batch"]


@dataclass(frozen=True)
class IntegrationConfig:
    step: float = 1e-5
    t_end: float = 1.0
    record_stride: int = 1
    deadband_radius: float = 1e-6
    clamp_enabled: bool = False
    step_guard: bool = False
    guard_ratio: float = 0.1
    guard_min_norm: float = 1.0
    method: str = "euler"
    halt_radius: float | None = None
    halt_dwell: float = 0.05

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigurationError("integration requires step > 0")
        if not self.t_end >= self.step:
            raise ConfigurationError("integration requires t_end >= step")
        if not (isinstance(self.record_stride, int) and self.record_stride >= 1):
            raise ConfigurationError("integration requires record_stride >= 1")
        if not self.deadband_radius >= 0:
            raise ConfigurationError("integration requires deadband_radius >= 0")
        if self.method not in ("euler", "rk4"):
            raise ConfigurationError(f"unknown integration method {self.method!r}")
        if self.method == "rk4" and (self.clamp_enabled or self.step_guard):
            raise ConfigurationError("rk4 is for smooth scenarios only; disable clamp and step guard")
        if not 0 < self.guard_ratio < 1:
            raise ConfigurationError("integration requires 0 < guard_ratio < 1")
        if self.halt_radius is not None and not self.halt_radius >= 0:
            raise ConfigurationError("integration requires halt_radius >= 0")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.step))


@dataclass
class Trajectory:
    """Uniformly sampled solution. ``states`` has shape (N, n)."""

    times: np.ndarray
    states: np.ndarray
    norms: np.ndarray
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not (len(self.times) == len(self.states) == len(self.norms)):
            raise ValueError("trajectory arrays must have equal length")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _rk4_step(rhs, x, t, h):
    k1 = rhs(x, t)
    k2 = rhs(x + 0.5 * h * k1, t + 0.5 * h)
    k3 = rhs(x + 0.5 * h * k2, t + 0.5 * h)
    k4 = rhs(x + h * k3, t + h)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(rhs: Callable, x0, cfg: IntegrationConfig, metadata: dict | None = None) -> Trajectory:
    """Integrate from t = 0 to ``cfg.t_end`` and return the recorded samples.

    Raises DivergenceError at the first non-finite state.
    """
    scalar = np.ndim(x0) == 0
    if scalar:
        x = float(x0)
        norm = abs
        dot = float.__mul__
        zero = 0.0
        to_row = lambda v: (v,)  # noqa: E731
    else:
        x = np.array(x0, dtype=float)
        if x.ndim != 1:
            raise ConfigurationError("initial state must be a scalar or a 1-D array")
        norm = lambda v: math.sqrt(float(np.dot(v, v)))  # noqa: E731
        dot = lambda a, b: float(np.dot(a, b))  # noqa: E731
        zero = np.zeros_like(x)
        to_row = tuple

    n0 = norm(x)
    if not math.isfinite(n0):
        raise DivergenceError("initial state is not finite", 0, 0.0)

    h = cfg.step
    n_steps = cfg.n_steps
    stride = cfg.record_stride
    rk4 = cfg.method == "rk4"
    guard = cfg.step_guard
    clamp = cfg.clamp_enabled
    deadband = cfg.deadband_radius
    halt_r = cfg.halt_radius

    times = [0.0]
    rows = [to_row(x)]
    norms = [n0]
    clamped_at = None
    substeps = 0
    halted_at = None
    inside_since = 0.0 if (halt_r is not None and n0 <= halt_r) else None
    if clamp and n0 <= deadband:
        x, n0, clamped_at = zero, 0.0, 0.0

    for k in range(n_steps):
        t = k * h
        if clamped_at is not None:
            x_new = zero
            n_new = 0.0
        else:
            try:
                if rk4:
                    x_new = _rk4_step(rhs, x, t, h)
                elif guard and n0 > cfg.guard_min_norm:
                    x_new, used = _guarded_step(rhs, x, t, h, norm, cfg)
                    substeps += used
                else:
                    x_new = x + h * rhs(x, t)
                n_new = norm(x_new)
            except OverflowError:
                # float arithmetic raises where numpy would return inf
                n_new = math.inf
            if not math.isfinite(n_new):
                raise DivergenceError(
                    f"non-finite state at step {k + 1} (t = {(k + 1) * h!r})", k + 1, (k + 1) * h)
            if clamp and (n_new <= deadband or (dot(x, x_new) <= 0.0 and n_new <= n0)):
                x_new, n_new = zero, 0.0
                clamped_at = (k + 1) * h
        x, n0 = x_new, n_new

        if halt_r is not None:
            if n0 <= halt_r:
                if inside_since is None:
                    inside_since = (k + 1) * h
            else:
                inside_since = None

        if (k + 1) % stride == 0:
            t1 = (k + 1) * h
            times.append(t1)
            rows.append(to_row(x))
            norms.append(n0)
            if inside_since is not None and t1 - inside_since >= cfg.halt_dwell:
                halted_at = t1
                break

    meta = dict(metadata or {})
    meta.update(
        step=h,
        record_stride=stride,
        method=cfg.method,
        step_guard_substeps=substeps,
        clamped_at=clamped_at,
        halted_at=halted_at,
    )
    return Trajectory(np.asarray(times), np.asarray(rows, dtype=float), np.asarray(norms), meta)


def _guarded_step(rhs, x, t, h, norm, cfg):
    """One fundamental step split into substeps that move x by at most guard_ratio*|x|."""
    remaining = h
    tt = t
    used = 0
    while remaining > 0.0:
        f = rhs(x, tt)
        nx = norm(x)
        nf = norm(f)
        dt = remaining
        if nx > cfg.guard_min_norm and nf * remaining > cfg.guard_ratio * nx:
            dt = cfg.guard_ratio * nx / nf
            used += 1
        x = x + dt * f
        if dt >= remaining:
            break
        remaining -= dt
        tt += dt
    return x, used


@dataclass(frozen=True)
class SimJob:
    rhs: Callable
    x0: Any
    cfg: IntegrationConfig
    label: str = ""
    metadata: dict = field(default_factory=dict)


def _run_job(job: SimJob) -> Trajectory | PredtimeError:
    meta = dict(job.metadata)
    meta.setdefault("label", job.label)
    try:
        return integrate(job.rhs, job.x0, job.cfg, meta)
    except PredtimeError as exc:
        return exc


def integrate_batch(jobs: Sequence[SimJob], max_workers: int | None = None) -> list[Trajectory | PredtimeError]:
    """Run every job; results come back in input order.

    A failing job yields its exception in place of a trajectory instead of
    aborting the batch. ``max_workers`` > 1 runs jobs on a thread pool.
    """
    if not max_workers or max_workers <= 1:
        return [_run_job(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(_run_job, jobs))
