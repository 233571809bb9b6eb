import copy
import json

import pytest

from ssip import config


@pytest.fixture
def charged():
    return config.load(config.bundled_scenarios()["charged_beams"])


def raw(name):
    with open(config.bundled_scenarios()[name], encoding="utf-8") as fh:
        return json.load(fh)


@pytest.mark.parametrize("name", ["charged_beams", "adhesive_lj", "repulsive_lj_crossed"])
def test_bundled_scenarios_validate(name):
    cfg = config.validate(raw(name))
    assert cfg["name"] == name


def test_defaults_filled():
    doc = raw("charged_beams")
    doc.pop("quadrature", None)
    doc.pop("outputs", None)
    cfg = config.validate(doc)
    assert cfg["quadrature"] == {"segments": 2, "points": 10}
    assert cfg["outputs"]["centerline_samples"] == 11
    assert cfg["solver"]["max_iterations"] == 50


def test_validate_does_not_mutate():
    doc = raw("charged_beams")
    before = copy.deepcopy(doc)
    config.validate(doc)
    assert doc == before


@pytest.mark.parametrize("path,value", [
    ((), "unknown_key"),
    (("solver",), "tolerance"),
    (("fibers", 0), "colour"),
])
def test_unknown_keys_rejected(path, value):
    doc = raw("charged_beams")
    node = doc
    for p in path:
        node = node[p]
    node[value] = 1
    with pytest.raises(config.ConfigError):
        config.validate(doc)


def test_missing_stiffness():
    doc = raw("charged_beams")
    del doc["fibers"][0]["youngs_modulus_pressure"]
    with pytest.raises(config.ConfigError, match="fibers/0"):
        config.validate(doc)


def test_law_needs_parameters():
    doc = raw("charged_beams")
    del doc["interaction"]["k_energy_length_m"]
    with pytest.raises(config.ConfigError, match="needs"):
        config.validate(doc)


def test_surface_charge_required():
    doc = raw("charged_beams")
    del doc["fibers"][1]["surface_charge_per_area"]
    with pytest.raises(config.ConfigError, match="surface_charge"):
        config.validate(doc)


def test_regularization_only_for_lj():
    doc = raw("charged_beams")
    doc["interaction"]["regularization_gap_length"] = "auto"
    with pytest.raises(config.ConfigError, match="regularization"):
        config.validate(doc)


def test_wrong_type_reports_path():
    doc = raw("charged_beams")
    doc["quadrature"]["points"] = "ten"
    with pytest.raises(config.ConfigError, match="quadrature/points"):
        config.validate(doc)


@pytest.mark.parametrize("text,value", [("inf", float("inf")), ("0.5", 0.5), (2, 2.0)])
def test_parse_length_or_inf(text, value):
    assert config.parse_length_or_inf(text) == value


def test_schema_is_json():
    assert json.loads(config.schema_json())["type"] == "object"
