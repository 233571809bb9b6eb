"""Scenario configuration: JSON documents validated against a schema.

Keys carrying physical quantities end in their unit kind (``_length``,
``_force``, ``_energy``, ``_pressure``, ...) in one consistent unit system.
Unknown keys are rejected.
"""

from __future__ import annotations

import copy
import json
import math
from pathlib import Path

import jsonschema

_vec3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_comps = {"type": "array", "items": {"enum": ["x", "y", "z", "tx", "ty", "tz"]}, "uniqueItems": True}
_num_or_inf = {"anyOf": [{"type": "number", "minimum": 0}, {"const": "inf"}]}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "fibers"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "fibers": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object", "additionalProperties": False,
                "required": ["start_length", "end_length", "elements", "radius_length"],
                "properties": {
                    "start_length": _vec3,
                    "end_length": _vec3,
                    "elements": {"type": "integer", "minimum": 1},
                    "radius_length": {"type": "number", "exclusiveMinimum": 0},
                    "rigid": {"type": "boolean"},
                    "youngs_modulus_pressure": {"type": "number", "exclusiveMinimum": 0},
                    "poisson_ratio": {"type": "number"},
                    "axial_stiffness_force": {"type": "number", "exclusiveMinimum": 0},
                    "bending_stiffness_force_length2": {"type": "number", "exclusiveMinimum": 0},
                    "surface_charge_per_area": {"type": "number"},
                    "in_plane": {"enum": ["xy", "yz", "xz"]},
                    "supports": {
                        "type": "array",
                        "items": {
                            "type": "object", "additionalProperties": False,
                            "required": ["node", "fix"],
                            "properties": {
                                "node": {"type": "integer"},
                                "fix": _comps,
                                "displacement_length": {"type": "array", "items": {"type": "number"}},
                            },
                        },
                    },
                    "loads": {
                        "type": "array",
                        "items": {
                            "type": "object", "additionalProperties": False,
                            "required": ["node", "force_force"],
                            "properties": {"node": {"type": "integer"}, "force_force": _vec3},
                        },
                    },
                },
            },
        },
        "interaction": {
            "type": "object", "additionalProperties": False,
            "required": ["law"],
            "properties": {
                "law": {"enum": ["monopole_surface", "monopole_volume", "short_range",
                                 "lennard_jones", "lennard_jones_repulsive"]},
                "k_energy_length_m": {"type": "number"},
                "exponent": {"type": "number", "exclusiveMinimum": 0},
                "density_product_per_length6": {"type": "number"},
                "phi_eq_energy": {"type": "number", "exclusiveMaximum": 0},
                "r_eq_length": {"type": "number", "exclusiveMinimum": 0},
                "regularization_gap_length": {"anyOf": [{"type": "number", "exclusiveMinimum": 0},
                                                        {"enum": ["auto", "off"]}]},
                "cutoff_length": _num_or_inf,
                "exclude": {"enum": ["adjacent", "same_fiber", "none"]},
                "scale_with_load": {"type": "boolean"},
            },
        },
        "quadrature": {
            "type": "object", "additionalProperties": False,
            "properties": {"segments": {"type": "integer", "minimum": 1},
                           "points": {"type": "integer", "minimum": 1}},
        },
        "solver": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "tol_residual": {"type": "number", "exclusiveMinimum": 0},
                "tol_increment_length": {"type": "number", "exclusiveMinimum": 0},
                "max_iterations": {"type": "integer", "minimum": 1},
                "increment_cap_length": {"anyOf": [{"type": "number", "exclusiveMinimum": 0},
                                                   {"enum": ["auto", "off"]}]},
                "initial_step": {"type": "number", "exclusiveMinimum": 0},
                "min_step": {"type": "number", "exclusiveMinimum": 0},
                "double_after": {"type": "integer", "minimum": 1},
            },
        },
        "load": {
            "type": "object", "additionalProperties": False,
            "properties": {"targets": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                                       "minItems": 1}},
        },
        "checks": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "momentum_balance": {"type": "number", "exclusiveMinimum": 0},
                "mirror_symmetry": {
                    "type": "object", "additionalProperties": False,
                    "required": ["axis", "plane_length", "tolerance_length"],
                    "properties": {"axis": {"enum": ["x", "y", "z"]}, "plane_length": {"type": "number"},
                                   "tolerance_length": {"type": "number", "exclusiveMinimum": 0}},
                },
                "zero_reaction": {
                    "type": "object", "additionalProperties": False,
                    "required": ["component", "tolerance_force"],
                    "properties": {"component": {"enum": ["x", "y", "z"]},
                                   "tolerance_force": {"type": "number", "exclusiveMinimum": 0}},
                },
                "positive_gap": {"type": "boolean"},
                "load_symmetry": {
                    "type": "object", "additionalProperties": False,
                    "required": ["axis", "tolerance"],
                    "properties": {"axis": {"enum": ["x", "y", "z"]},
                                   "tolerance": {"type": "number", "exclusiveMinimum": 0}},
                },
            },
        },
        "outputs": {
            "type": "object", "additionalProperties": False,
            "properties": {"centerline_samples": {"type": "integer", "minimum": 2}},
        },
    },
}

DEFAULTS = {
    "quadrature": {"segments": 2, "points": 10},
    "solver": {"tol_residual": 1e-10, "tol_increment_length": 1e-7, "max_iterations": 50,
               "increment_cap_length": "off", "initial_step": 1.0, "min_step": 1.0 / 1024,
               "double_after": 4},
    "load": {"targets": [1.0]},
    "checks": {},
    "outputs": {"centerline_samples": 11},
}


class ConfigError(ValueError):
    pass


def validate(doc: dict) -> dict:
    """Validate and fill defaults; returns a new dictionary."""
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ConfigError(f"{path or '<root>'}: {exc.message}") from None
    out = copy.deepcopy(doc)
    for key, default in DEFAULTS.items():
        merged = dict(default)
        merged.update(out.get(key, {}))
        out[key] = merged
    for i, fib in enumerate(out["fibers"]):
        rigid = fib.get("rigid", False)
        has_e = "youngs_modulus_pressure" in fib
        has_s = "axial_stiffness_force" in fib and "bending_stiffness_force_length2" in fib
        if not rigid and not (has_e or has_s):
            raise ConfigError(f"fibers/{i}: give youngs_modulus_pressure or both stiffnesses, or rigid")
    if "interaction" in out:
        _check_interaction(out["interaction"], out["fibers"])
    return out


def _check_interaction(ia: dict, fibers: list):
    law = ia["law"]
    need = {
        "monopole_surface": ["k_energy_length_m", "exponent"],
        "monopole_volume": ["k_energy_length_m", "exponent", "density_product_per_length6"],
        "short_range": ["k_energy_length_m", "exponent", "density_product_per_length6"],
        "lennard_jones": ["phi_eq_energy", "r_eq_length", "density_product_per_length6"],
        "lennard_jones_repulsive": ["phi_eq_energy", "r_eq_length", "density_product_per_length6"],
    }[law]
    missing = [k for k in need if k not in ia]
    if missing:
        raise ConfigError(f"interaction: law {law} needs {', '.join(missing)}")
    if law == "monopole_surface" and any("surface_charge_per_area" not in f for f in fibers):
        raise ConfigError("interaction: monopole_surface needs surface_charge_per_area on every fiber")
    if "regularization_gap_length" in ia and law != "lennard_jones":
        raise ConfigError("interaction: regularization applies to lennard_jones only")


def load(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return validate(json.load(fh))


def parse_length_or_inf(text) -> float:
    if text in ("inf", math.inf):
        return math.inf
    return float(text)


def schema_json() -> str:
    return json.dumps(SCHEMA, indent=2)


def bundled_scenarios() -> dict:
    """Name to path of the scenario files shipped next to the package source."""
    root = Path(__file__).resolve().parents[2] / "scenarios"
    return {p.stem: p for p in sorted(root.glob("*.json"))}
