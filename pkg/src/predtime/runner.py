"""Execute parsed scenarios, write CSV trajectories and assemble the summary.

CSV format: a header row, then one row per recorded sample with every
value printed as ``%.17g`` (enough digits to round-trip an IEEE double
exactly). Lines end with ``\\n``. Re-running a scenario reproduces the
files byte for byte.
"""
from __future__ import annotations

import dataclasses
import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (
    SweepRow,
    SweepTable,
    envelope_dominance,
    lyapunov_margin,
    settling_time,
    ultimate_bound_check,
)
from .control import closed_loop_rhs
from .errors import PredtimeError
from .scenario import Scenario
from .sim import Trajectory, integrate
from .systems import circle_reference

__all__ = ["RunSummary", "run_scenarios", "write_csv", "read_csv", "trajectory_rows"]


@dataclass
class RunSummary:
    scenarios: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s["passed"] for s in self.scenarios)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "scenarios": self.scenarios}

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_json_default) + "\n",
                        encoding="utf-8")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _clean(value):
    """Replace non-finite floats so the summary stays valid JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


# ---------------------------------------------------------------------------
# CSV

def trajectory_rows(traj: Trajectory, stride: int = 1, reference=None) -> tuple[list[str], np.ndarray]:
    """Header and numeric table for a trajectory, decimated by ``stride``.

    With a reference r(t) the reconstructed plant state x = s + r(t) is
    appended after the s components.
    """
    idx = np.arange(0, len(traj), stride)
    if idx[-1] != len(traj) - 1:
        idx = np.append(idx, len(traj) - 1)
    t = traj.times[idx]
    states = traj.states[idx]
    if reference is None:
        names = ["x"] if traj.dim == 1 else [f"x{i + 1}" for i in range(traj.dim)]
        header = ["t", *names, "norm"]
        table = np.column_stack([t, states, traj.norms[idx]])
    else:
        xs = states + np.array([reference(float(tk)) for tk in t])
        header = ["t", *[f"s{i + 1}" for i in range(traj.dim)], *[f"x{i + 1}" for i in range(traj.dim)], "norm_s"]
        table = np.column_stack([t, states, xs, traj.norms[idx]])
    return header, table


def write_csv(path: Path, header: list[str], table: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        np.savetxt(fh, table, fmt="%.17g", delimiter=",", newline="\n")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [[float(v) for v in line.split(",")] for line in fh if line.strip()]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))


# ---------------------------------------------------------------------------
# execution

def _scalar_runs(sc: Scenario, out: Path | None) -> tuple[list[dict], bool, dict]:
    runs = []
    table = SweepTable(sc.system, sc.epsilon, sc.dwell)
    want_settling = "settling" in sc.checks or "floor" in sc.checks
    cfg = sc.cfg
    if want_settling:
        cfg = dataclasses.replace(cfg, record_stride=1, halt_radius=sc.epsilon, halt_dwell=sc.dwell)
    else:
        cfg = dataclasses.replace(cfg, record_stride=1)
    ok = True
    for j, model in enumerate(sc.models()):
        bound = model.settling_bound() if want_settling else math.inf
        for i, x0 in enumerate(sc.x0):
            entry: dict = {"x0": x0, "params": dataclasses.asdict(model.params)}
            t0 = time.perf_counter()
            try:
                traj = integrate(model.rhs, x0, cfg)
            except PredtimeError as exc:
                entry.update(status="error", error=f"{type(exc).__name__}: {exc}")
                ok = False
                table.rows.append(SweepRow(model.params, x0, None, bound))
                runs.append(entry)
                continue
            entry["wall_time"] = time.perf_counter() - t0
            entry.update(status="ok", step_guard_substeps=traj.metadata["step_guard_substeps"],
                         halted_at=traj.metadata["halted_at"])
            if want_settling:
                rep = settling_time(traj, sc.epsilon, sc.dwell, bound + sc.settle_margin)
                table.rows.append(SweepRow(model.params, x0, rep.settling_time, bound))
                entry["settling"] = rep.to_dict()
                entry["settling"]["formula_bound"] = bound
                if "settling" in sc.checks:
                    ok &= rep.satisfied
            if out is not None:
                name = f"{sc.name}_p{j:02d}_x{i:02d}.csv"
                write_csv(out / name, *trajectory_rows(traj, sc.cfg.record_stride))
                entry["csv"] = name
            runs.append(entry)
    extra = {}
    if "floor" in sc.checks:
        floor_value = table.sup_floor
        floor_ok = floor_value >= sc.floor
        extra = {"floor": {"sup_floor": floor_value, "required": sc.floor, "passed": floor_ok,
                           "min_time": table.min_time}}
        ok &= floor_ok
    return runs, ok, extra


def _tracking_runs(sc: Scenario, out: Path | None) -> tuple[list[dict], bool, dict]:
    ctrl, dist = sc.controller, sc.disturbance
    rhs = closed_loop_rhs(ctrl, dist)
    r, _ = circle_reference()
    b = sc.bound_b
    mu = 1.01 * b if b > 0 else 0.0
    cfg = dataclasses.replace(sc.cfg, record_stride=1)
    runs = []
    ok = True
    for i, c in enumerate(sc.x0):
        entry: dict = {"x0": [c, c]}
        s0 = np.array([c, c]) - r(0.0)
        t0 = time.perf_counter()
        try:
            traj = integrate(rhs, s0, cfg)
        except PredtimeError as exc:
            entry.update(status="error", error=f"{type(exc).__name__}: {exc}")
            runs.append(entry)
            ok = False
            continue
        entry["wall_time"] = time.perf_counter() - t0
        entry.update(status="ok", step_guard_substeps=traj.metadata["step_guard_substeps"],
                     clamped_at=traj.metadata["clamped_at"])
        if "ultimate_bound" in sc.checks:
            v = ultimate_bound_check(traj, b, ctrl.rho1, sc.effective_slack)
            entry["ultimate_bound"] = v.to_dict()
            ok &= v.passed
        if "settling" in sc.checks:
            rep = settling_time(traj, sc.epsilon, sc.dwell, ctrl.rho1)
            entry["settling"] = rep.to_dict()
            ok &= rep.satisfied
        if "lyapunov" in sc.checks:
            chk = lyapunov_margin(traj, ctrl.kappa, ctrl.rho2, ctrl.rho1, mu=mu)
            entry["lyapunov"] = chk.to_dict()
            ok &= chk.passed
        if "envelope" in sc.checks:
            chk = envelope_dominance(traj, ctrl.kappa, ctrl.rho2, ctrl.rho1, mu=mu)
            entry["envelope"] = chk.to_dict()
            ok &= chk.passed
        if out is not None:
            name = f"{sc.name}_x{i:02d}.csv"
            write_csv(out / name, *trajectory_rows(traj, sc.cfg.record_stride, reference=r))
            entry["csv"] = name
        runs.append(entry)
    return runs, ok, {"ultimate_bound_b": b, "mu": mu, "slack": sc.effective_slack}


def run_scenarios(scenarios: list[Scenario], out: Path | None) -> RunSummary:
    """Run every scenario. Errors inside one scenario never stop the others."""
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    summary = RunSummary()
    for sc in scenarios:
        t0 = time.perf_counter()
        runner = _tracking_runs if sc.system == "tracking" else _scalar_runs
        runs, ok, extra = runner(sc, out)
        entry = {
            "name": sc.name,
            "system": sc.system,
            "description": sc.description,
            "checks": list(sc.checks),
            "step": sc.cfg.step,
            "runs": runs,
            "passed": bool(ok),
            "status": "error" if any(r.get("status") == "error" for r in runs) else "ok",
            "wall_time": time.perf_counter() - t0,
            "step_guard_activations": sum(r.get("step_guard_substeps", 0) for r in runs),
            **extra,
        }
        summary.scenarios.append(_clean(entry))
    return summary


def write_plot_script(path: Path, summary: RunSummary) -> None:
    """gnuplot script drawing the norm column of every CSV on a log scale."""
    lines = ["set datafile separator ','", "set logscale y", "set xlabel 't'", "set ylabel 'norm'",
             "set key outside"]
    for sc in summary.scenarios:
        files = [r["csv"] for r in sc["runs"] if "csv" in r]
        if not files:
            continue
        lines.append(f"set title '{sc['name']}'")
        lines.append(f"set output '{sc['name']}.png'")
        plots = [f"'{f}' using 1:(column('{'norm_s' if sc['system'] == 'tracking' else 'norm'}')) "
                 f"with lines title '{f}'" for f in files]
        lines.append("plot " + ", \\\n     ".join(plots))
    path.write_text("set terminal pngcairo size 900,600\n" + "\n".join(lines) + "\n", encoding="utf-8")


def default_out_dir() -> Path:
    return Path(os.environ.get("PREDTIME_OUT", "predtime-out"))
