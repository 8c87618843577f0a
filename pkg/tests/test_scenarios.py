import math
from pathlib import Path

import numpy as np
import pytest
import yaml

from unruh_channel.channels import unruh_channel
from unruh_channel.fidelities import avg_gate_fidelity
from unruh_channel.measures import qnd_mid_closed, unruh_bell_closed, unruh_fmax_closed
from unruh_channel.scenarios import (
    AXIS_RANGES,
    CAPTION_DEFAULTS,
    PANELS,
    SCENARIOS,
    Axis,
    ScenarioError,
    SweepSpec,
    default_spec,
    emit_csv,
    find_mcms,
    format_value,
    get_scenario,
    grid_points,
    load_config,
    parse_assignments,
    parse_value,
    result_grid,
    run_scenario,
    spec_from_mapping,
    spec_to_mapping,
)
from unruh_channel.verification import GOLDEN, GOLDEN_STEPS, golden_path

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
P8, P4 = math.pi / 8, math.pi / 4

# Values stated in each figure caption, copied by hand. Panel (a) sweeps T and s,
# panel (b) sweeps t and r.
CAPTIONS = {
    ("bell-qnd", "ts"): {"r": P8, "t": 0.5, "omega0": 1, "gamma0": 0.1},
    ("bell-qnd", "tr"): {"T": 0.5, "s": 0.5, "omega0": 1, "gamma0": 0.1},
    ("concurrence-qnd", "ts"): {"r": P8, "t": 0.5, "omega0": 0.1, "gamma0": 0.1},
    ("concurrence-qnd", "tr"): {"T": 1.5, "s": 1.5, "omega0": 0.1, "gamma0": 0.1},
    ("teleport-qnd", "ts"): {"r": P8, "t": 0.5, "omega0": 1, "gamma0": 0.1},
    ("teleport-qnd", "tr"): {"T": 1.5, "s": 1.5, "omega0": 1, "gamma0": 0.1},
    ("mid-qnd", "ts"): {"r": P8, "t": 0.5, "omega0": 1, "gamma0": 0.1},
    ("mid-qnd", "tr"): {"T": 1.5, "s": 1.5, "omega0": 1, "gamma0": 0.1},
    ("bell-sgad", "ts"): {"r": P8, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("bell-sgad", "tr"): {"T": 0.5, "s": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("concurrence-sgad", "ts"): {"r": P8, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("concurrence-sgad", "tr"): {"T": 0.5, "s": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("teleport-sgad", "ts"): {"r": P8, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("teleport-sgad", "tr"): {"T": 0.5, "s": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("mid-sgad", "ts"): {"r": P8, "t": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("mid-sgad", "tr"): {"T": 0.5, "s": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("gav-qnd", "ts"): {"r": P8, "t": 0.5, "omega0": 1, "gamma0": 0.1},
    ("gav-qnd", "tr"): {"T": 0.5, "s": 0.5, "omega0": 1, "gamma0": 0.1},
    ("gav-sgad", "ts"): {"r": P8, "t": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("gav-sgad", "tr"): {"T": 0.5, "s": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("chi-qnd", "ts"): {"r": P8, "t": 0.5, "omega0": 1, "gamma0": 0.1},
    ("chi-qnd", "tr"): {"T": 0.5, "s": 0.5, "omega0": 1, "gamma0": 0.1},
    ("chi-sgad", "ts"): {"r": P8, "t": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("chi-sgad", "tr"): {"T": 0.5, "s": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0},
    ("coherence-qnd", "ts"): {"a_bath": 0, "omega0": 1, "gamma0": 0.1, "t": 2, "r": P8, "theta": P4, "phi": P4},
    ("coherence-qnd", "tr"): {"a_bath": 0, "omega0": 1, "gamma0": 0.5, "T": 0.5, "s": 0.5, "theta": P4, "phi": P4},
    ("coherence-sgad", "ts"): {"phi_s": 0, "omega0": 0.1, "gamma0": 0.1, "t": 2, "r": P8, "theta": P4, "phi": P4},
    ("coherence-sgad", "tr"): {"phi_s": 0, "omega0": 0.1, "gamma0": 0.1, "T": 0.5, "s": 0.5, "theta": P4, "phi": P4},
    ("inequality-qnd", "ts"): {"t": 2, "r": P8, "omega0": 0.1, "gamma0": 0.1, "theta": P4, "phi": P4},
    ("inequality-qnd", "tr"): {"T": 0.5, "s": 0.5, "omega0": 0.1, "gamma0": 0.1, "theta": P4, "phi": P4},
    ("inequality-sgad", "ts"): {"t": 2, "r": P8, "phi_s": 0, "omega0": 0.1, "gamma0": 0.1, "theta": P4, "phi": P4},
    ("inequality-sgad", "tr"): {"T": 0.5, "s": 0.5, "phi_s": 0, "omega0": 0.1, "gamma0": 0.1, "theta": P4, "phi": P4},
}
# coherence and mixedness share one figure per panel
for (_name, _panel), _vals in list(CAPTIONS.items()):
    if _name.startswith("coherence-"):
        CAPTIONS[(_name.replace("coherence", "mixedness"), _panel)] = _vals

# filled in where a caption is silent (a time for the SGAD T x s panels, open QND bath knobs)
UNSTATED = {
    "qnd": {"omega_c": 1.0, "a_bath": 0.0},
    "sgad": {"t": 0.5},
}


def test_scenario_catalogue():
    assert len(SCENARIOS) == 18
    assert set(CAPTION_DEFAULTS) == {(n, p) for n in SCENARIOS for p in PANELS}
    assert set(CAPTIONS) == set(CAPTION_DEFAULTS)


@pytest.mark.parametrize("key", sorted(CAPTIONS), ids=lambda k: f"{k[0]}-{k[1]}")
def test_defaults_mirror_captions(key):
    name, panel = key
    sc = get_scenario(name)
    want = dict(CAPTIONS[key])
    for k, v in UNSTATED[sc.noise].items():
        want.setdefault(k, v)
    spec = default_spec(name, panel)
    swept = {spec.axis1.name, spec.axis2.name}
    want = {k: float(v) for k, v in want.items() if k not in swept}
    assert CAPTION_DEFAULTS[key] == pytest.approx(want, abs=1e-15)


def test_axis_ranges_follow_figure_axes():
    assert AXIS_RANGES["s"] == (-2.0, 2.0)
    assert AXIS_RANGES["r"] == (0.0, pytest.approx(P4))
    assert 0.0 < AXIS_RANGES["T"][0] < AXIS_RANGES["T"][1] == 3.0


def test_unknown_scenario_and_panel():
    with pytest.raises(ScenarioError, match="unknown scenario"):
        get_scenario("bell-thermal")
    with pytest.raises(ScenarioError, match="panel"):
        default_spec("bell-qnd", "xy")


def test_missing_parameter_is_named():
    spec = default_spec("bell-qnd", "tr", steps=2)
    fixed = dict(spec.fixed)
    del fixed["omega0"]
    with pytest.raises(ScenarioError, match="omega0"):
        run_scenario(SweepSpec(spec.scenario, spec.axis1, spec.axis2, fixed))


def test_inapplicable_parameter_is_named():
    spec = default_spec("bell-qnd", "tr", steps=2)
    with pytest.raises(ScenarioError, match="phi_s"):
        run_scenario(SweepSpec(spec.scenario, spec.axis1, spec.axis2, {**spec.fixed, "phi_s": 0.0}))


def test_axis_validation():
    with pytest.raises(ScenarioError):
        Axis("q", 0, 1, 3)
    with pytest.raises(ScenarioError):
        Axis("t", 0, 1, 1)
    with pytest.raises(ScenarioError):
        Axis("t", 1, 1, 3)
    with pytest.raises(ScenarioError):
        SweepSpec("bell-qnd", Axis("t", 0, 1, 2), Axis("t", 0, 2, 2))


def test_bell_qnd_origin_is_two():
    res = run_scenario(default_spec("bell-qnd", "tr", steps=5))
    assert res.header == ("t", "r", "B")
    assert res.rows[0][:2] == (0.0, 0.0)
    assert res.rows[0][2] == pytest.approx(2.0, abs=1e-12)


def test_gav_qnd_zero_time_column():
    spec = default_spec("gav-qnd", "tr", steps=9)
    grid = result_grid(run_scenario(spec), spec)
    for r, val in zip(spec.axis2.values(), grid[0]):
        assert val == pytest.approx((2 + (1 + math.cos(r)) ** 2) / 6, abs=1e-12)


@pytest.mark.parametrize("name", ["coherence-sgad", "inequality-sgad", "inequality-qnd"])
@pytest.mark.parametrize("panel", PANELS)
def test_inequality_bounded(name, panel):
    spec = default_spec(name, panel, steps=21)
    grid = result_grid(run_scenario(spec), spec)
    if name.startswith("inequality"):
        assert np.all(grid <= 1 + 1e-12)
    assert np.all(np.isfinite(grid))


def test_grid_points_are_axis1_major():
    spec = default_spec("bell-sgad", "ts", steps=3)
    pts = list(grid_points(spec))
    assert len(pts) == 9
    assert [p["T"] for p in pts[:3]] == [0.05] * 3
    assert [p["s"] for p in pts[:3]] == [-2.0, 0.0, 2.0]


def test_csv_shape_and_format(tmp_path):
    spec = default_spec("teleport-qnd", "tr", steps=2)
    out = tmp_path / "f.csv"
    emit_csv(run_scenario(spec), out)
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,r,F_max"
    assert len(lines) == 5
    assert lines[1] == "0,0,1"
    assert format_value(-0.0) == "0"
    assert format_value(1 / 3) == "0.333333333"


def test_csv_is_deterministic_across_workers(tmp_path):
    spec = default_spec("mid-sgad", "tr", steps=6)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(run_scenario(spec), a)
    emit_csv(run_scenario(spec, workers=2), b)
    assert a.read_bytes() == b.read_bytes()


def test_csv_write_error_names_path(tmp_path):
    res = run_scenario(default_spec("bell-qnd", "tr", steps=2))
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv(res, bad)


@pytest.mark.parametrize("name,panel", GOLDEN)
def test_golden_fixtures(name, panel, tmp_path):
    out = tmp_path / "g.csv"
    emit_csv(run_scenario(default_spec(name, panel, steps=GOLDEN_STEPS)), out)
    assert out.read_bytes() == golden_path(name, panel).read_bytes()


CORNER = {
    "bell": lambda r: unruh_bell_closed(r),
    "concurrence": math.cos,
    "teleport": unruh_fmax_closed,
    "mid": lambda r: qnd_mid_closed(r, 1.0),
    "gav": lambda r: avg_gate_fidelity(unruh_channel(r)),
}


@pytest.mark.parametrize("measure", sorted(CORNER))
@pytest.mark.parametrize("noise", ["qnd", "sgad"])
def test_zero_time_edge_is_pure_unruh(measure, noise):
    spec = default_spec(f"{measure}-{noise}", "tr", steps=7)
    grid = result_grid(run_scenario(spec), spec)
    for r, val in zip(spec.axis2.values(), grid[0]):
        assert val == pytest.approx(CORNER[measure](r), abs=1e-9)


def test_parse_value():
    assert parse_value("pi/8") == pytest.approx(P8)
    assert parse_value("3*pi/4") == pytest.approx(3 * P4)
    assert parse_value("-pi") == pytest.approx(-math.pi)
    assert parse_value("0.25") == 0.25
    assert parse_value(2) == 2.0
    with pytest.raises(ScenarioError):
        parse_value("two")


def test_parse_assignments():
    assert parse_assignments(["T=1.5", "r=pi/8"]) == {"T": 1.5, "r": pytest.approx(P8)}
    with pytest.raises(ScenarioError):
        parse_assignments(["T"])
    with pytest.raises(ScenarioError):
        parse_assignments(["x=1"])


@pytest.mark.parametrize("name", sorted(SCENARIOS))
@pytest.mark.parametrize("panel", PANELS)
def test_shipped_configs_match_defaults(name, panel):
    path = CONFIGS / f"{name}-{panel}.yaml"
    assert load_config(path) == default_spec(name, panel, output_path=f"{name}-{panel}.csv")


def test_config_round_trip_and_overrides(tmp_path):
    spec = default_spec("chi-sgad", "ts", steps=5, output_path="x.csv")
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(spec_to_mapping(spec)))
    assert load_config(path) == spec
    custom = spec_from_mapping({"scenario": "chi-sgad", "panel": "ts", "steps": 3, "fixed": {"r": "pi/4"},
                                "axis1": {"name": "T", "lo": 0.5, "hi": 1.0}})
    assert custom.fixed["r"] == pytest.approx(P4)
    assert custom.axis1 == Axis("T", 0.5, 1.0, 3)


def test_config_errors(tmp_path):
    with pytest.raises(ScenarioError, match="scenario"):
        spec_from_mapping({"panel": "ts"})
    with pytest.raises(ScenarioError, match="unknown config keys"):
        spec_from_mapping({"scenario": "bell-qnd", "panel": "ts", "colour": "red"})
    bad = tmp_path / "bad.yaml"
    bad.write_text("scenario: [unclosed\n")
    with pytest.raises(ScenarioError, match="YAML"):
        load_config(bad)
    with pytest.raises(ScenarioError, match="cannot read"):
        load_config(tmp_path / "absent.yaml")


def test_find_mcms_rejects_pair_scenarios():
    with pytest.raises(ScenarioError):
        find_mcms(default_spec("bell-qnd", "tr", steps=3))
