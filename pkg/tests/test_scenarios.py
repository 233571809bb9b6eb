import json

import numpy as np
import pytest

from ssip import config, scenarios


def cfg_of(name, **edits):
    with open(config.bundled_scenarios()[name], encoding="utf-8") as fh:
        doc = json.load(fh)
    for k, v in edits.items():
        doc[k] = v
    return doc


def test_charged_run_writes_outputs(tmp_path):
    doc = cfg_of("charged_beams", load={"targets": [0.2]})
    res = scenarios.run_scenario(config.validate(doc), tmp_path)
    assert res.passed
    log = json.loads((tmp_path / "log.json").read_text())
    assert log["passed"] and len(log["steps"]) == len(res.history)
    lines = (tmp_path / "centerlines.txt").read_text().split("\n")
    assert lines[0] == "# fiber x y z"
    assert "" in lines[1:-1]  # blank line between fibers
    head = (tmp_path / "line_loads.csv").read_text().splitlines()[0]
    assert head == "load_factor,fiber,element,point,x,y,z,fx,fy,fz"


def test_rerun_is_bit_identical(tmp_path):
    doc = config.validate(cfg_of("charged_beams", load={"targets": [0.2]}))
    scenarios.run_scenario(doc, tmp_path / "a")
    scenarios.run_scenario(doc, tmp_path / "b")
    for f in ("log.json", "centerlines.txt", "line_loads.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_uncharged_fibers_stay_straight():
    doc = cfg_of("charged_beams", load={"targets": [1.0]})
    for f in doc["fibers"]:
        f["surface_charge_per_area"] = 0.0
    res = scenarios.run_scenario(config.validate(doc))
    assert res.error is None
    assert np.abs(res.X - res.model.X0.ravel()).max() < 1e-14
    assert res.history[-1].energy_ia == 0.0


def test_charged_beams_attract_symmetrically():
    res = scenarios.run_scenario(config.validate(cfg_of("charged_beams", load={"targets": [0.4]})))
    assert res.passed and len(res.history) == 1
    mid = [res.model.fiber_nodes(f)[len(res.model.fiber_nodes(f)) // 2] for f in (0, 1)]
    x = res.X.reshape(-1, 6)[mid, 0]
    assert x[0] > 0.0 and x[1] < 5.0
    assert x[0] == pytest.approx(5.0 - x[1], abs=1e-10)


@pytest.mark.slow
def test_repulsive_crossing_passes():
    res = scenarios.run_scenario(config.validate(cfg_of("repulsive_lj_crossed")))
    assert res.passed, res.checks


def test_min_gap_of_initial_crossing():
    doc = config.validate(cfg_of("repulsive_lj_crossed"))
    model = scenarios.build_model(doc)
    # sampled at quadrature points, so an upper bound on the exact gap
    g = scenarios.min_gap(model, model.X0.ravel())
    assert 0.1 * 0.05 * (1 - 1e-9) <= g < 0.1 * 0.05 * 1.05


def test_abort_is_reported():
    doc = cfg_of("charged_beams", load={"targets": [1.0]})
    doc["solver"] = {"max_iterations": 1, "min_step": 0.25, "initial_step": 1.0}
    res = scenarios.run_scenario(config.validate(doc))
    assert not res.passed and "last load factor" in res.error
