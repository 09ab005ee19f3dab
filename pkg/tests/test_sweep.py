import json

import numpy as np
import pytest

from spingeom import geometry, sweep
from spingeom.hilbert import SystemConfig
from spingeom.sweep import Grid, SpecError, SweepSpec, run_sweep


def test_grid_parse():
    assert Grid.parse("0:1:5").values().tolist() == [0, 0.25, 0.5, 0.75, 1.0]
    assert Grid.parse("0.7").values().tolist() == [0.7]
    for bad in ("1:0:3", "0:1", "a:b:c", "0:1:0", "0:1:1", "nan:1:2"):
        with pytest.raises(ValueError):
            Grid.parse(bad)


def test_row_count_is_grid_product():
    spec = SweepSpec("metric", SystemConfig.create(2, 1), theta=Grid(0.1, 3.0, 4),
                     phi=Grid(0, 1, 2), xi=Grid(0, 2, 3))
    result = run_sweep(spec)
    assert len(result.rows) == 24
    assert result.header[-1] == "status"
    one = run_sweep(SweepSpec("curvature", SystemConfig.create(2, 1), theta=Grid.point(1.0)))
    assert len(one.rows) == 1
    assert one.rows[0][1] == geometry.gaussian_curvature(SystemConfig.create(2, 1), 1.0)


def test_output_is_deterministic_and_parallel_safe():
    spec = SweepSpec("phase", SystemConfig.create(3, 1), theta=Grid(0.2, 2.9, 5), xi=Grid(0, 3, 4))
    serial = run_sweep(spec)
    assert sweep.to_csv(serial) == sweep.to_csv(run_sweep(spec))
    assert sweep.to_csv(run_sweep(spec, jobs=2)) == sweep.to_csv(serial)
    assert sweep.to_json(run_sweep(spec, jobs=2)) == sweep.to_json(serial)


def test_csv_and_json_formats():
    spec = SweepSpec("speed", SystemConfig.create(2, 2), theta=Grid(0, np.pi, 3))
    result = run_sweep(spec)
    lines = sweep.to_csv(result).splitlines()
    meta = {}
    for line in lines:
        if line.startswith("# "):
            key, value = line[2:].split(": ", 1)
            meta[key] = json.loads(value)
    assert meta["quantity"] == "speed" and meta["config"]["n_spins"] == 2
    assert "tolerances" in meta and "version" in meta
    body = [line for line in lines if not line.startswith("#")]
    assert body[0] == "theta,speed,status" and len(body) == 4
    doc = json.loads(sweep.to_json(result))
    assert doc["metadata"] == result.metadata
    assert [row["speed"] for row in doc["rows"]] == pytest.approx(result.column("speed"))


def test_singular_points_are_flagged():
    result = run_sweep(SweepSpec("curvature", SystemConfig.create(2, 1), theta=Grid(0, np.pi, 3)))
    assert result.column("status") == ["singular", "ok", "singular"]
    assert result.column("curvature")[0] is None
    assert ",singular" in sweep.to_csv(result)
    assert json.loads(sweep.to_json(result))["rows"][0]["curvature"] is None
    phase = run_sweep(SweepSpec("phase", SystemConfig.create(2, 1), theta=Grid.point(np.pi / 2),
                                xi=Grid.point(np.pi)))
    assert phase.column("status") == ["singular"]


def test_unwrapped_phase_is_continuous():
    spec = SweepSpec("phase", SystemConfig.create(2, 2), theta=Grid.point(1.0), xi=Grid(0, 12, 200), unwrap=True)
    g = np.array(run_sweep(spec).column("global_phase"))
    assert np.max(np.abs(np.diff(g))) < np.pi


def test_euler_sweep():
    result = run_sweep(SweepSpec("euler", SystemConfig.create(2, 1), xi_max=np.pi))
    assert result.column("euler_characteristic")[0] == pytest.approx(2.0, abs=1e-2)
    assert result.metadata["xi_max"] == np.pi


def test_spec_errors_name_the_field():
    config = SystemConfig.create(2, 1)
    cases = [
        (dict(quantity="euler"), "xi_max"),
        (dict(quantity="nope"), "quantity"),
        (dict(quantity="metric", theta=Grid(0, 4, 2)), "theta"),
        (dict(quantity="metric", xi=Grid(-1, 0, 2)), "xi"),
        (dict(quantity="brachistochrone", xi=Grid.point(0.0)), "xi"),
        (dict(quantity="metric", c_count=0), "c_count"),
    ]
    for kwargs, field in cases:
        with pytest.raises(SpecError) as info:
            SweepSpec(config=config, **kwargs)
        assert info.value.field == field
    with pytest.raises(SpecError) as info:
        SweepSpec("concurrence", SystemConfig.create(3, 1))
    assert info.value.field == "n"
    with pytest.raises(SpecError):
        sweep.render(run_sweep(SweepSpec("speed", config)), "xml")


def test_figure_preset_endpoints():
    result = sweep.run_figure("fig1", twice_spins=(1,), c_count=5)
    k = result.column("curvature")
    assert len(k) == 5
    assert k[0] == pytest.approx(5.0, rel=1e-9)
    assert k[-1] == pytest.approx(0.0, abs=1e-9)
    assert result.metadata["tilde_xi"] == 1.0
    all_spins = sweep.run_figure("fig3", c_count=3)
    assert sorted(set(all_spins.column("twice_spin"))) == [1, 2, 3, 4]
