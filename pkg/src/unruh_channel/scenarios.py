"""Figure sweeps: named scenarios evaluated over two-parameter grids.

A scenario fixes the noise model (QND or SGAD acting after the Unruh
channel) and the quantity recorded at each grid point. Each scenario has two
panels, ``ts`` (temperature x squeezing) and ``tr`` (time x Unruh angle),
whose fixed parameters are taken from the corresponding figure captions.
"""
from __future__ import annotations

import csv
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np
import yaml
from scipy.optimize import minimize

from .channels import IDENTITY, KrausChannel, apply, compose, qnd_channel, sgad_channel, unruh_channel
from .fidelities import avg_gate_fidelity, channel_fidelity
from .measures import (
    MCMS_TOL,
    bell_B,
    bell_pair_through,
    cm_slack,
    coherence_l1,
    concurrence,
    f_max,
    mid,
    mixedness,
    pure_qubit,
)
from .relparams import QndBathParams, SgadBathParams

PARAM_IDS = ("T", "s", "t", "r", "theta", "phi", "omega0", "gamma0", "omega_c", "a_bath", "phi_s")
PANELS = ("ts", "tr")
DEFAULT_STEPS = 41

_NOISE_PARAMS = {
    "qnd": ("T", "s", "t", "r", "omega0", "gamma0", "omega_c", "a_bath"),
    "sgad": ("T", "s", "t", "r", "omega0", "gamma0", "phi_s"),
}


class ScenarioError(ValueError):
    """Unknown scenario, bad parameter id or missing parameter."""


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.name not in PARAM_IDS:
            raise ScenarioError(f"unknown parameter id {self.name!r}")
        if self.steps < 2:
            raise ScenarioError(f"axis {self.name}: steps must be at least 2")
        if not self.lo < self.hi:
            raise ScenarioError(f"axis {self.name}: need lo < hi, got {self.lo} and {self.hi}")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    scenario: str
    axis1: Axis
    axis2: Axis
    fixed: Mapping[str, float] = field(default_factory=dict)
    output_path: str | None = None

    def __post_init__(self):
        if self.axis1.name == self.axis2.name:
            raise ScenarioError("the two axes must sweep different parameters")
        for k in self.fixed:
            if k not in PARAM_IDS:
                raise ScenarioError(f"unknown parameter id {k!r}")


@dataclass(frozen=True)
class ScenarioResult:
    header: tuple[str, str, str]
    rows: tuple[tuple[float, float, float], ...]


@dataclass(frozen=True)
class Scenario:
    name: str
    noise: str
    column: str
    kind: str  # "pair", "channel" or "qubit"
    measure: Callable

    @property
    def params(self) -> tuple[str, ...]:
        extra = ("theta", "phi") if self.kind == "qubit" else ()
        return _NOISE_PARAMS[self.noise] + extra


def _inequality(rho) -> float:
    return coherence_l1(rho) ** 2 + mixedness(rho)


def _chi(ch) -> float:
    return channel_fidelity(ch).chi


_MEASURES = {
    "bell": ("pair", "B", bell_B),
    "concurrence": ("pair", "C", concurrence),
    "teleport": ("pair", "F_max", f_max),
    "mid": ("pair", "M", mid),
    "gav": ("channel", "G_av", avg_gate_fidelity),
    "chi": ("channel", "chi", _chi),
    "coherence": ("qubit", "C_l1", coherence_l1),
    "mixedness": ("qubit", "mixedness", mixedness),
    "inequality": ("qubit", "C2_plus_M", _inequality),
}

SCENARIOS: dict[str, Scenario] = {}
for _m, (_kind, _col, _fn) in _MEASURES.items():
    for _noise in ("qnd", "sgad"):
        _name = f"{_m}-{_noise}"
        SCENARIOS[_name] = Scenario(_name, _noise, _col, _kind, _fn)

# Axis ranges of the figures. T starts just above zero; see README.
AXIS_RANGES = {
    "T": (0.05, 3.0),
    "s": (-2.0, 2.0),
    "t": (0.0, 3.0),
    "r": (0.0, math.pi / 4),
}
PANEL_AXES = {"ts": ("T", "s"), "tr": ("t", "r")}

_PI8 = math.pi / 8
_PI4 = math.pi / 4
# Parameters the captions leave open: QND cutoff and squeezing offset.
_QND_OPEN = {"omega_c": 1.0, "a_bath": 0.0}


def _qnd(omega0, gamma0=0.1, **rest):
    return {"omega0": omega0, "gamma0": gamma0, **_QND_OPEN, **rest}


def _sgad(omega0=0.1, gamma0=0.1, **rest):
    return {"omega0": omega0, "gamma0": gamma0, "phi_s": 0.0, **rest}


# Fixed parameters per (scenario, panel), transcribed from the figure captions.
# A ts caption that gives no interaction time uses t = 0.5 like its siblings.
CAPTION_DEFAULTS: dict[tuple[str, str], dict[str, float]] = {
    ("bell-qnd", "ts"): _qnd(1.0, r=_PI8, t=0.5),
    ("bell-qnd", "tr"): _qnd(1.0, T=0.5, s=0.5),
    ("concurrence-qnd", "ts"): _qnd(0.1, r=_PI8, t=0.5),
    ("concurrence-qnd", "tr"): _qnd(0.1, T=1.5, s=1.5),
    ("teleport-qnd", "ts"): _qnd(1.0, r=_PI8, t=0.5),
    ("teleport-qnd", "tr"): _qnd(1.0, T=1.5, s=1.5),
    ("mid-qnd", "ts"): _qnd(1.0, r=_PI8, t=0.5),
    ("mid-qnd", "tr"): _qnd(1.0, T=1.5, s=1.5),
    ("gav-qnd", "ts"): _qnd(1.0, r=_PI8, t=0.5),
    ("gav-qnd", "tr"): _qnd(1.0, T=0.5, s=0.5),
    ("chi-qnd", "ts"): _qnd(1.0, r=_PI8, t=0.5),
    ("chi-qnd", "tr"): _qnd(1.0, T=0.5, s=0.5),
    ("coherence-qnd", "ts"): _qnd(1.0, t=2.0, r=_PI8, theta=_PI4, phi=_PI4),
    ("coherence-qnd", "tr"): _qnd(1.0, gamma0=0.5, T=0.5, s=0.5, theta=_PI4, phi=_PI4),
    ("mixedness-qnd", "ts"): _qnd(1.0, t=2.0, r=_PI8, theta=_PI4, phi=_PI4),
    ("mixedness-qnd", "tr"): _qnd(1.0, gamma0=0.5, T=0.5, s=0.5, theta=_PI4, phi=_PI4),
    ("inequality-qnd", "ts"): _qnd(0.1, t=2.0, r=_PI8, theta=_PI4, phi=_PI4),
    ("inequality-qnd", "tr"): _qnd(0.1, T=0.5, s=0.5, theta=_PI4, phi=_PI4),
    ("bell-sgad", "ts"): _sgad(r=_PI8, t=0.5),
    ("bell-sgad", "tr"): _sgad(T=0.5, s=0.5),
    ("concurrence-sgad", "ts"): _sgad(r=_PI8, t=0.5),
    ("concurrence-sgad", "tr"): _sgad(T=0.5, s=0.5),
    ("teleport-sgad", "ts"): _sgad(r=_PI8, t=0.5),
    ("teleport-sgad", "tr"): _sgad(T=0.5, s=0.5),
    ("mid-sgad", "ts"): _sgad(r=_PI8, t=0.5),
    ("mid-sgad", "tr"): _sgad(T=0.5, s=0.5),
    ("gav-sgad", "ts"): _sgad(r=_PI8, t=0.5),
    ("gav-sgad", "tr"): _sgad(T=0.5, s=0.5),
    ("chi-sgad", "ts"): _sgad(r=_PI8, t=0.5),
    ("chi-sgad", "tr"): _sgad(T=0.5, s=0.5),
    ("coherence-sgad", "ts"): _sgad(t=2.0, r=_PI8, theta=_PI4, phi=_PI4),
    ("coherence-sgad", "tr"): _sgad(T=0.5, s=0.5, theta=_PI4, phi=_PI4),
    ("mixedness-sgad", "ts"): _sgad(t=2.0, r=_PI8, theta=_PI4, phi=_PI4),
    ("mixedness-sgad", "tr"): _sgad(T=0.5, s=0.5, theta=_PI4, phi=_PI4),
    ("inequality-sgad", "ts"): _sgad(t=2.0, r=_PI8, theta=_PI4, phi=_PI4),
    ("inequality-sgad", "tr"): _sgad(T=0.5, s=0.5, theta=_PI4, phi=_PI4),
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ScenarioError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None


def default_spec(scenario: str, panel: str = "tr", steps: int = DEFAULT_STEPS,
                 output_path: str | None = None) -> SweepSpec:
    get_scenario(scenario)
    if panel not in PANELS:
        raise ScenarioError(f"unknown panel {panel!r}; choose from {', '.join(PANELS)}")
    a1, a2 = PANEL_AXES[panel]
    axes = [Axis(n, *AXIS_RANGES[n], steps) for n in (a1, a2)]
    fixed = dict(CAPTION_DEFAULTS[(scenario, panel)])
    return SweepSpec(scenario, axes[0], axes[1], fixed, output_path)


def noise_channel(noise: str, p: Mapping[str, float]) -> KrausChannel:
    if noise == "qnd":
        bath = QndBathParams(T=p["T"], squeeze_s=p["s"], squeeze_a=p["a_bath"], gamma0=p["gamma0"],
                             omega_c=p["omega_c"], omega0=p["omega0"])
        return qnd_channel(bath, p["t"])
    bath = SgadBathParams(T=p["T"], squeeze_s=p["s"], squeeze_phi=p["phi_s"], gamma0=p["gamma0"],
                          omega0=p["omega0"])
    if p["t"] == 0:
        # the SGAD coefficients degenerate at t = 0, where the map is the identity
        return IDENTITY
    return sgad_channel(bath, p["t"])


def scenario_channel(sc: Scenario, p: Mapping[str, float]) -> KrausChannel:
    """Unruh channel followed by the scenario's bath noise."""
    return compose(noise_channel(sc.noise, p), unruh_channel(p["r"]))


def evaluate_point(sc: Scenario, p: Mapping[str, float]) -> float:
    ch = scenario_channel(sc, p)
    if sc.kind == "pair":
        return float(sc.measure(bell_pair_through(ch)))
    if sc.kind == "channel":
        return float(sc.measure(ch))
    return float(sc.measure(apply(ch, pure_qubit(p["theta"], p["phi"]))))


def _point_params(spec: SweepSpec, sc: Scenario) -> dict[str, float]:
    swept = {spec.axis1.name, spec.axis2.name}
    for name in swept:
        if name not in sc.params:
            raise ScenarioError(f"parameter {name!r} does not apply to scenario {sc.name}")
    for name in spec.fixed:
        if name not in sc.params and name not in swept:
            raise ScenarioError(f"parameter {name!r} does not apply to scenario {sc.name}")
    missing = [n for n in sc.params if n not in swept and n not in spec.fixed]
    if missing:
        raise ScenarioError(f"scenario {sc.name} is missing parameter(s): {', '.join(missing)}")
    return {k: float(v) for k, v in spec.fixed.items() if k not in swept}


def grid_points(spec: SweepSpec):
    """Full parameter dicts of the grid, axis1-major."""
    sc = get_scenario(spec.scenario)
    base = _point_params(spec, sc)
    for v1 in spec.axis1.values():
        for v2 in spec.axis2.values():
            yield {**base, spec.axis1.name: float(v1), spec.axis2.name: float(v2)}


def _row_block(args) -> list[float]:
    name, base, n1, v1, n2, values2 = args
    sc = SCENARIOS[name]
    out = []
    for v2 in values2:
        out.append(evaluate_point(sc, {**base, n1: v1, n2: v2}))
    return out


def run_scenario(spec: SweepSpec, workers: int = 1) -> ScenarioResult:
    """Evaluate the scenario on the full grid, rows in axis1-major order.

    ``workers > 1`` spreads the axis1 rows over processes; the output does not
    depend on the worker count.
    """
    sc = get_scenario(spec.scenario)
    base = _point_params(spec, sc)
    v1s, v2s = spec.axis1.values(), spec.axis2.values()
    jobs = [(sc.name, base, spec.axis1.name, float(v1), spec.axis2.name, [float(v) for v in v2s])
            for v1 in v1s]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_row_block, jobs))
    else:
        blocks = [_row_block(j) for j in jobs]
    rows = []
    for v1, block in zip(v1s, blocks):
        for v2, val in zip(v2s, block):
            if not math.isfinite(val):
                raise ArithmeticError(f"non-finite {sc.column} at {spec.axis1.name}={v1}, {spec.axis2.name}={v2}")
            rows.append((float(v1), float(v2), val))
    return ScenarioResult((spec.axis1.name, spec.axis2.name, sc.column), tuple(rows))


def result_grid(result: ScenarioResult, spec: SweepSpec) -> np.ndarray:
    """Measure values reshaped to ``(steps1, steps2)``."""
    return np.array([r[2] for r in result.rows]).reshape(spec.axis1.steps, spec.axis2.steps)


def format_value(x: float) -> str:
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


def emit_csv(result: ScenarioResult, path) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(result.header)
            for row in result.rows:
                w.writerow([format_value(x) for x in row])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


@dataclass(frozen=True)
class McmsSearch:
    """Smallest coherence-mixedness slack found in a sweep domain."""

    grid_min: float
    grid_hits: int
    point: tuple[float, float]
    slack: float

    @property
    def found(self) -> bool:
        return self.slack < MCMS_TOL


def find_mcms(spec: SweepSpec) -> McmsSearch:
    """Locate a maximally coherent mixed state inside the sweep rectangle.

    Grid nodes rarely land exactly on the zero set of the slack, so the best
    node is refined by a bounded local minimization over both axes.
    """
    sc = get_scenario(spec.scenario)
    if sc.kind != "qubit":
        raise ScenarioError(f"scenario {sc.name} does not produce a single-qubit state")
    base = _point_params(spec, sc)
    n1, n2 = spec.axis1.name, spec.axis2.name

    def slack(x):
        p = {**base, n1: float(x[0]), n2: float(x[1])}
        return cm_slack(apply(scenario_channel(sc, p), pure_qubit(p["theta"], p["phi"])))

    v1s, v2s = spec.axis1.values(), spec.axis2.values()
    grid = np.array([[slack((a, b)) for b in v2s] for a in v1s])
    i, j = np.unravel_index(np.argmin(grid), grid.shape)
    res = minimize(
        slack,
        x0=[v1s[i], v2s[j]],
        method="Nelder-Mead",
        bounds=[(spec.axis1.lo, spec.axis1.hi), (spec.axis2.lo, spec.axis2.hi)],
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 2000},
    )
    best = (float(res.x[0]), float(res.x[1])), float(res.fun)
    if grid[i, j] < best[1]:
        best = (float(v1s[i]), float(v2s[j])), float(grid[i, j])
    return McmsSearch(
        grid_min=float(grid.min()),
        grid_hits=int(np.sum(grid < MCMS_TOL)),
        point=best[0],
        slack=best[1],
    )


_PI_RE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_value(text) -> float:
    """Float from a number or a multiple of pi such as ``pi/8`` or ``3*pi/4``."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _PI_RE.match(str(text))
    if m:
        k = m.group(1)
        coeff = float(k) if k not in ("", "+", "-") else (-1.0 if k == "-" else 1.0)
        div = float(m.group(2)) if m.group(2) else 1.0
        return coeff * math.pi / div
    try:
        return float(text)
    except ValueError:
        raise ScenarioError(f"cannot read {text!r} as a number") from None


def parse_assignments(items) -> dict[str, float]:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ScenarioError(f"expected key=value, got {item!r}")
        if key not in PARAM_IDS:
            raise ScenarioError(f"unknown parameter id {key!r}")
        out[key] = parse_value(value)
    return out


def _axis_from(data, fallback: Axis | None) -> Axis:
    if data is None:
        if fallback is None:
            raise ScenarioError("axis missing from config")
        return fallback
    if not isinstance(data, Mapping):
        raise ScenarioError("axis entries must be mappings with name, lo, hi, steps")
    name = data.get("name", fallback.name if fallback else None)
    if name is None:
        raise ScenarioError("axis needs a name")
    if fallback is not None and name != fallback.name:
        fallback = Axis(name, *AXIS_RANGES.get(name, (0.0, 1.0)), fallback.steps)
    try:
        lo = parse_value(data.get("lo", fallback.lo if fallback else None))
        hi = parse_value(data.get("hi", fallback.hi if fallback else None))
        steps = int(data.get("steps", fallback.steps if fallback else DEFAULT_STEPS))
    except TypeError:
        raise ScenarioError(f"axis {name}: lo and hi are required") from None
    return Axis(name, lo, hi, steps)


def spec_from_mapping(data: Mapping) -> SweepSpec:
    """Build a spec from parsed config data.

    ``panel`` selects caption defaults; ``axis1``, ``axis2`` and ``fixed``
    override them entry by entry.
    """
    if not isinstance(data, Mapping) or "scenario" not in data:
        raise ScenarioError("config needs a 'scenario' entry")
    unknown = set(data) - {"scenario", "panel", "steps", "axis1", "axis2", "fixed", "output"}
    if unknown:
        raise ScenarioError(f"unknown config keys: {', '.join(sorted(unknown))}")
    scenario = str(data["scenario"])
    get_scenario(scenario)
    base = None
    if "panel" in data:
        base = default_spec(scenario, str(data["panel"]), int(data.get("steps", DEFAULT_STEPS)))
    fixed = dict(base.fixed) if base else {}
    fixed.update({str(k): parse_value(v) for k, v in (data.get("fixed") or {}).items()})
    a1 = _axis_from(data.get("axis1"), base.axis1 if base else None)
    a2 = _axis_from(data.get("axis2"), base.axis2 if base else None)
    for name in (a1.name, a2.name):
        fixed.pop(name, None)
    out = data.get("output")
    return SweepSpec(scenario, a1, a2, fixed, str(out) if out is not None else None)


def load_config(path) -> SweepSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"config {path} is not valid YAML: {exc}") from exc
    return spec_from_mapping(data)


def spec_to_mapping(spec: SweepSpec) -> dict:
    def axis(a: Axis):
        return {"name": a.name, "lo": a.lo, "hi": a.hi, "steps": a.steps}

    out = {"scenario": spec.scenario, "axis1": axis(spec.axis1), "axis2": axis(spec.axis2),
           "fixed": dict(spec.fixed)}
    if spec.output_path:
        out["output"] = spec.output_path
    return out
