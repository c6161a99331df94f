"""Scenario files: parsing, validation and the bundled presets.

A scenario file is INI text with one section per scenario. Values are
plain numbers, comma-separated lists of numbers, names from a fixed
vocabulary, or the constants ``pi``, ``N*pi`` and ``pi/N``. Nothing is
evaluated as code.

Keys
----
system            fixnopred | pred | tracking
rho1 .. rho5      system gains (fixnopred: rho1, rho2; pred: rho1..rho5)
                  or controller gains rho1..rho4 for tracking. For the
                  scalar systems rho1/rho2 may be lists; the grid is the
                  Cartesian product.
tc                pred only: list of predefined times, gains from the preset
kappa             tracking only: family name (default beta_form)
rho5 .. rho9      beta_form parameters alpha, beta, s, q, k (tracking only)
kappa.<name>      parameter of any other family, e.g. ``kappa.alpha = 2``
disturbance       tracking only: ``circle`` (reference [cos 2 pi t, sin 2 pi t])
delta             declared disturbance bound; must match the descriptor
x0                list of initial conditions; for tracking a scalar c means
                  x(0) = (c, c)
step, t_end, record_stride, deadband_radius, clamp, step_guard, method
checks            subset of settling, floor, envelope, lyapunov, ultimate_bound
epsilon, dwell    settling ball radius and dwell time
settle_margin     allowance added to the claimed settling bound
floor             lower bound for the min-over-gains of the max-over-x0 time
slack             ultimate-bound slack; default 2 rho3 step (rho4 > 0) or
                  deadband_radius + rho3 step (rho4 = 0)
description       free text
"""
from __future__ import annotations

import configparser
import itertools
import math
import re
from dataclasses import dataclass, replace

from .control import ControllerParams, ultimate_bound
from .errors import ConfigurationError, ScenarioError
from .kappa import K1Function, make_k1
from .sim import IntegrationConfig
from .systems import (
    DisturbanceSignal,
    FixedTimeParams,
    PredefinedParams,
    SystemModel,
    pred_param_preset,
    tracking_disturbance,
)

__all__ = ["Scenario", "parse_scenarios", "load_scenarios", "PRESETS", "preset_text", "list_presets"]

SYSTEMS = ("fixnopred", "pred", "tracking")
CHECKS = ("settling", "floor", "envelope", "lyapunov", "ultimate_bound")

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_NUMBER_RE = re.compile(rf"^{_NUM}$")
_PI_RE = re.compile(rf"^(?:({_NUM})\s*\*\s*)?pi(?:\s*/\s*({_NUM}))?$")
_BETA_KEYS = {"rho5": "alpha", "rho6": "beta", "rho7": "s", "rho8": "q", "rho9": "k"}

_COMMON_KEYS = {
    "system", "x0", "step", "t_end", "record_stride", "deadband_radius", "clamp", "step_guard",
    "method", "checks", "epsilon", "dwell", "settle_margin", "floor", "slack", "description",
}
_SYSTEM_KEYS = {
    "fixnopred": {"rho1", "rho2"},
    "pred": {"rho1", "rho2", "rho3", "rho4", "rho5", "tc"},
    "tracking": {"rho1", "rho2", "rho3", "rho4", "kappa", "disturbance", "delta"} | set(_BETA_KEYS),
}


def parse_number(text: str) -> float:
    t = text.strip().lower()
    if _NUMBER_RE.match(t):
        return float(t)
    m = _PI_RE.match(t)
    if m:
        val = math.pi
        if m.group(1):
            val *= float(m.group(1))
        if m.group(2):
            val /= float(m.group(2))
        return val
    raise ValueError(f"not a number: {text!r}")


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class Scenario:
    name: str
    system: str
    x0: tuple
    cfg: IntegrationConfig
    checks: tuple[str, ...]
    system_params: tuple = ()
    controller: ControllerParams | None = None
    disturbance: DisturbanceSignal | None = None
    epsilon: float = 1e-4
    dwell: float = 0.05
    settle_margin: float = 0.0
    floor: float | None = None
    slack: float | None = None
    description: str = ""

    @property
    def effective_slack(self) -> float:
        if self.slack is not None:
            return self.slack
        c = self.controller
        if c is None:
            return 0.0
        if c.rho4 > 0:
            return 2.0 * c.rho3 * self.cfg.step
        return self.cfg.deadband_radius + c.rho3 * self.cfg.step

    @property
    def bound_b(self) -> float:
        return ultimate_bound(self.controller, self.disturbance.bound)

    def models(self) -> list[SystemModel]:
        return [SystemModel(self.system, p) for p in self.system_params]

    def with_step(self, step: float) -> "Scenario":
        return replace(self, cfg=replace(self.cfg, step=step))


class _Section:
    """Typed access to one INI section."""

    def __init__(self, name: str, proxy):
        self.name = name
        self.data = {k: v for k, v in proxy.items()}

    def has(self, key: str) -> bool:
        return key in self.data

    def raw(self, key: str, default: str | None = None) -> str | None:
        return self.data.get(key, default)

    def _fail(self, key: str, msg: str):
        raise ScenarioError(msg, self.name, key)

    def number(self, key: str, default: float | None = None) -> float | None:
        text = self.raw(key)
        if text is None:
            return default
        try:
            return parse_number(text)
        except ValueError as exc:
            self._fail(key, str(exc))

    def numbers(self, key: str, default: list | None = None) -> list[float] | None:
        text = self.raw(key)
        if text is None:
            return default
        items = [t for t in text.split(",") if t.strip()]
        if not items:
            self._fail(key, "empty list")
        try:
            return [parse_number(t) for t in items]
        except ValueError as exc:
            self._fail(key, str(exc))

    def boolean(self, key: str, default: bool) -> bool:
        text = self.raw(key)
        if text is None:
            return default
        try:
            return _parse_bool(text)
        except ValueError as exc:
            self._fail(key, str(exc))

    def require(self, key: str) -> None:
        if key not in self.data:
            self._fail(key, "missing required key")


def _build(sec: _Section) -> Scenario:
    system = (sec.raw("system") or "").strip()
    if system not in SYSTEMS:
        sec._fail("system", f"expected one of {', '.join(SYSTEMS)}, got {system!r}")

    allowed = _COMMON_KEYS | _SYSTEM_KEYS[system]
    for key in sec.data:
        if key not in allowed and not (system == "tracking" and key.startswith("kappa.")):
            sec._fail(key, f"unknown key for system {system!r}")

    sec.require("x0")
    x0 = tuple(sec.numbers("x0"))

    checks_text = sec.raw("checks", "")
    checks = tuple(c.strip() for c in checks_text.split(",") if c.strip())
    for c in checks:
        if c not in CHECKS:
            sec._fail("checks", f"unknown check {c!r}; expected a subset of {', '.join(CHECKS)}")
    if "floor" in checks and not sec.has("floor"):
        sec._fail("floor", "the floor check needs a floor value")

    try:
        cfg = IntegrationConfig(
            step=sec.number("step", 1e-5),
            t_end=sec.number("t_end", 1.0),
            record_stride=int(sec.number("record_stride", 1)),
            deadband_radius=sec.number("deadband_radius", 1e-6),
            clamp_enabled=sec.boolean("clamp", False),
            step_guard=sec.boolean("step_guard", False),
            method=(sec.raw("method", "euler") or "euler").strip(),
        )
    except ConfigurationError as exc:
        raise ScenarioError(str(exc), sec.name) from None

    kw = dict(
        name=sec.name, system=system, x0=x0, cfg=cfg, checks=checks,
        epsilon=sec.number("epsilon", 1e-4), dwell=sec.number("dwell", 0.05),
        settle_margin=sec.number("settle_margin", 0.0), floor=sec.number("floor"),
        slack=sec.number("slack"), description=(sec.raw("description", "") or "").strip(),
    )
    if not kw["epsilon"] > 0:
        sec._fail("epsilon", "epsilon must be > 0")
    if not kw["dwell"] > 0:
        sec._fail("dwell", "dwell must be > 0")

    try:
        if system == "fixnopred":
            sec.require("rho1")
            sec.require("rho2")
            grid = itertools.product(sec.numbers("rho1"), sec.numbers("rho2"))
            kw["system_params"] = tuple(FixedTimeParams(a, b) for a, b in grid)
        elif system == "pred":
            kw["system_params"] = _pred_params(sec)
        else:
            _build_tracking(sec, kw)
    except ConfigurationError as exc:
        raise ScenarioError(str(exc), sec.name) from None

    if system != "tracking" and any(c in checks for c in ("envelope", "lyapunov", "ultimate_bound")):
        sec._fail("checks", "envelope, lyapunov and ultimate_bound apply to tracking scenarios only")
    if system == "tracking" and "floor" in checks:
        sec._fail("checks", "the floor check applies to the scalar systems only")
    if "settling" in checks and system != "tracking":
        # fail early when no closed-form bound exists
        for m in (SystemModel(system, p) for p in kw["system_params"]):
            try:
                m.settling_bound()
            except ConfigurationError as exc:
                raise ScenarioError(str(exc), sec.name, "checks") from None
    return Scenario(**kw)


def _pred_params(sec: _Section) -> tuple:
    if sec.has("tc"):
        if any(sec.has(k) for k in ("rho1", "rho2", "rho3", "rho4", "rho5")):
            sec._fail("tc", "give either tc or rho1..rho5, not both")
        return tuple(pred_param_preset(tc) for tc in sec.numbers("tc"))
    for k in ("rho1", "rho2", "rho3", "rho4", "rho5"):
        sec.require(k)
    return (PredefinedParams(*(sec.number(k) for k in ("rho1", "rho2", "rho3", "rho4", "rho5"))),)


def _build_kappa(sec: _Section) -> K1Function:
    family = (sec.raw("kappa", "beta_form") or "").strip()
    params: dict[str, float] = {}
    for key in sec.data:
        if key.startswith("kappa."):
            params[key[len("kappa."):]] = sec.number(key)
    beta_keys = [k for k in _BETA_KEYS if sec.has(k)]
    if beta_keys:
        if family != "beta_form":
            sec._fail(beta_keys[0], "rho5..rho9 name beta_form parameters; use kappa.<param> for other families")
        for k in beta_keys:
            params[_BETA_KEYS[k]] = sec.number(k)
    return make_k1(family, **params)


def _build_tracking(sec: _Section, kw: dict) -> None:
    for k in ("rho1", "rho2", "rho3", "rho4"):
        sec.require(k)
    kappa = _build_kappa(sec)
    ctrl = ControllerParams(*(sec.number(k) for k in ("rho1", "rho2", "rho3", "rho4")), kappa)
    kind = (sec.raw("disturbance", "circle") or "").strip()
    if kind != "circle":
        sec._fail("disturbance", f"unknown disturbance {kind!r}; expected 'circle'")
    dist = tracking_disturbance()
    delta = sec.number("delta", dist.bound)
    if not math.isclose(delta, dist.bound, rel_tol=1e-12):
        sec._fail("delta", f"declared delta {delta!r} is inconsistent with the circle reference (2*pi)")
    if not ctrl.rho3 > delta:
        sec._fail("rho3", f"controller requires rho3 > delta (rho3 = {ctrl.rho3!r}, delta = {delta!r})")
    if "ultimate_bound" in kw["checks"] and not kw["cfg"].t_end > ctrl.rho1:
        sec._fail("t_end", "ultimate_bound check needs t_end > rho1 (the predefined time)")
    kw["controller"] = ctrl
    kw["disturbance"] = dist


def parse_scenarios(text: str, source: str = "<string>") -> list[Scenario]:
    """Parse scenario INI text. Raises ScenarioError with section/key context."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        where = f"line {line}: " if line is not None else ""
        raise ScenarioError(where + str(exc).splitlines()[0]) from None
    return [_build(_Section(name, cp[name])) for name in cp.sections()]


def load_scenarios(path) -> list[Scenario]:
    with open(path, encoding="utf-8") as fh:
        return parse_scenarios(fh.read(), source=str(path))


# ---------------------------------------------------------------------------
# bundled presets

PRESETS: dict[str, tuple[str, str]] = {
    "paper-part1": (
        "circle tracking with the continuous controller (rho4 = 0.01); "
        "||s|| enters the 0.01 ball by t = 1",
        """\
[paper-part1]
description = continuous controller, ultimate bound 0.01 after T_c = 1
system = tracking
rho1 = 1
rho2 = 0
rho3 = 4*pi
rho4 = 0.01
kappa = beta_form
rho5 = 1
rho6 = 1
rho7 = 0.9
rho8 = 1.1
rho9 = 1
disturbance = circle
delta = 2*pi
x0 = 10, 1e3, 1e21
step = 1e-5
t_end = 1.5
record_stride = 10
checks = ultimate_bound, lyapunov, envelope
""",
    ),
    "paper-part2": (
        "circle tracking with the discontinuous controller (rho4 = 0); "
        "s reaches the origin by t = 1",
        """\
[paper-part2]
description = discontinuous controller, exact convergence before T_c = 1
system = tracking
rho1 = 1
rho2 = 0
rho3 = 4*pi
rho4 = 0
kappa = beta_form
rho5 = 1
rho6 = 1
rho7 = 0.9
rho8 = 1.1
rho9 = 1
disturbance = circle
delta = 2*pi
x0 = 10, 1e3, 1e21
step = 1e-5
t_end = 1.5
record_stride = 10
clamp = true
deadband_radius = 1e-6
epsilon = 1e-4
checks = ultimate_bound, settling, lyapunov, envelope
""",
    ),
    "example1-sweep": (
        "fixed-time system swept over gains; settling times stay below "
        "pi/(2(1-rho2)) and the worst case never drops below pi/2",
        """\
[example1-sweep]
description = fixed-time but not predefined-time: the worst case cannot be tuned below pi/2
system = fixnopred
rho1 = 0.1, 1, 10
rho2 = 0.1, 0.5, 0.9
x0 = 1, -1, 1e3, -1e3
step = 1e-5
t_end = 16
record_stride = 100
step_guard = true
epsilon = 1e-4
dwell = 0.05
settle_margin = 0.01
floor = 1.5207963267948966
checks = settling, floor
""",
    ),
    "example2-preset": (
        "predefined-time system with gains set from T_c in {0.5, 1, 2}; "
        "every run settles before T_c",
        """\
[example2-preset]
description = settling-time supremum equals the chosen T_c
system = pred
tc = 0.5, 1, 2
x0 = 10, -10, 1e3, -1e3, 1e21, -1e21
step = 1e-5
t_end = 2.2
record_stride = 100
step_guard = true
epsilon = 1e-4
dwell = 0.05
checks = settling
""",
    ),
}


def preset_text(name: str) -> str:
    try:
        return PRESETS[name][1]
    except KeyError:
        raise ScenarioError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None


def list_presets() -> list[tuple[str, str]]:
    return [(name, desc) for name, (desc, _) in PRESETS.items()]
