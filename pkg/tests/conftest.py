"""Shared closed-loop trajectories for the circle-tracking presets.

Each preset takes a few seconds per initial condition, so the runs are made
once per session and reused by the analysis and acceptance tests.
"""
import dataclasses

import numpy as np
import pytest

from predtime.control import closed_loop_rhs
from predtime.scenario import parse_scenarios, preset_text
from predtime.sim import integrate
from predtime.systems import circle_reference


def _tracking_runs(preset):
    sc = parse_scenarios(preset_text(preset))[0]
    rhs = closed_loop_rhs(sc.controller, sc.disturbance)
    r, _ = circle_reference()
    cfg = dataclasses.replace(sc.cfg, record_stride=1)
    return sc, {c: integrate(rhs, np.array([c, c]) - r(0.0), cfg) for c in sc.x0}


@pytest.fixture(scope="session")
def part1():
    return _tracking_runs("paper-part1")


@pytest.fixture(scope="session")
def part2():
    return _tracking_runs("paper-part2")


# acceptance bookkeeping: one PASS/FAIL line per criterion at the end of the run
_ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def record():
    def _record(criterion: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
        print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")
        return bool(ok)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[n]
        ok = all(p for p, _ in parts)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  " + "; ".join(d for _, d in parts))
