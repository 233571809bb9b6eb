"""Build solver models from validated configs, run them and write result files.

Outputs per run (UTF-8, LF):
  log.json         per-step solver log, reactions, energies and check results
  centerlines.txt  ``fiber x y z`` per line, one blank line between fibers
  line_loads.csv   interaction force per unit length at every quadrature point
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ConfigError
from .elastic import ElasticParams
from .geometry import eval_centerline
from .pair import line_loads, sample
from .potentials import (CrossSectionPair, LJComposite, LennardJones, LongRangeMonopole,
                         ShortRangeSmallSep, c_small_sep, default_reg_gap, regularize_lj)
from .quadrature import QuadratureRule
from .solver import (Interaction, LoadSteppingAborted, Model, SolverConfig, StepRecord,
                     adaptive_load_stepping, find_pairs, total_iterations)

log = logging.getLogger(__name__)

_COMP = {"x": 0, "y": 1, "z": 2, "tx": 3, "ty": 4, "tz": 5}
_PLANE_NORMAL = {"xy": 2, "yz": 0, "xz": 1}


@dataclass
class ScenarioResult:
    name: str
    model: Model
    history: list[StepRecord]
    checks: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c["passed"] for c in self.checks.values())

    @property
    def X(self) -> np.ndarray:
        return self.history[-1].X if self.history else self.model.X0.ravel()


def _elastic(fib: dict) -> ElasticParams | None:
    if fib.get("rigid", False):
        return None
    if "axial_stiffness_force" in fib:
        return ElasticParams(fib["axial_stiffness_force"], fib["bending_stiffness_force_length2"])
    return ElasticParams.circle(fib["youngs_modulus_pressure"], fib["radius_length"])


def build_law(cfg: dict):
    ia = cfg["interaction"]
    fibers = cfg["fibers"]
    radii = {f["radius_length"] for f in fibers}
    if len(radii) != 1 and ia["law"] != "monopole_surface":
        raise ConfigError("interaction: near-contact laws need equal radii on all fibers")
    R = fibers[0]["radius_length"]
    law_name = ia["law"]
    if law_name == "monopole_surface":
        lams = [2 * math.pi * f["radius_length"] * f["surface_charge_per_area"] for f in fibers]
        products = {round(lams[i] * lams[j], 15) for i in range(len(lams)) for j in range(i + 1, len(lams))}
        if len(products) > 1:
            raise ConfigError("interaction: one law per run needs equal charge products for all fiber pairs")
        prod = lams[0] * lams[1] if len(lams) > 1 else lams[0] ** 2
        return LongRangeMonopole(ia["k_energy_length_m"] * prod, ia["exponent"])
    rho = ia.get("density_product_per_length6")
    pair = CrossSectionPair(R, R, rho_product=rho)
    if law_name == "monopole_volume":
        return LongRangeMonopole.volume(ia["k_energy_length_m"], ia["exponent"], pair)
    if law_name == "short_range":
        m = ia["exponent"]
        return ShortRangeSmallSep(c_small_sep(m, ia["k_energy_length_m"], pair), m)
    if law_name == "lennard_jones_repulsive":
        lj = LennardJones(ia["phi_eq_energy"], ia["r_eq_length"])
        return ShortRangeSmallSep(c_small_sep(12, lj.k12, pair), 12)
    law = LJComposite.from_lj(ia["phi_eq_energy"], ia["r_eq_length"], pair)
    reg = ia.get("regularization_gap_length", "off")
    if reg == "off":
        return law
    g_reg = default_reg_gap(ia["r_eq_length"]) if reg == "auto" else float(reg)
    return regularize_lj(law, g_reg)


def solver_config(cfg: dict) -> SolverConfig:
    s = cfg["solver"]
    cap = s["increment_cap_length"]
    if cap == "off":
        cap = None
    elif cap == "auto":
        cap = 0.5 * min(f["radius_length"] for f in cfg["fibers"])
    return SolverConfig(tol_residual=s["tol_residual"], tol_increment=s["tol_increment_length"],
                        max_iters=s["max_iterations"], increment_cap=cap,
                        initial_step=s["initial_step"], min_step=s["min_step"],
                        double_after=s["double_after"])


def build_model(cfg: dict) -> Model:
    model = Model()
    for i, fib in enumerate(cfg["fibers"]):
        el = _elastic(fib)
        fid = model.add_straight_fiber(fib["start_length"], fib["end_length"], fib["elements"],
                                       fib["radius_length"], el)
        nodes = model.fiber_nodes(fid)
        for sup in fib.get("supports", []):
            try:
                node = nodes[sup["node"]]
            except IndexError:
                raise ConfigError(f"fibers/{i}: support node {sup['node']} out of range") from None
            comps = [_COMP[c] for c in sup["fix"]]
            disp = sup.get("displacement_length")
            if disp is not None and len(disp) != len(comps):
                raise ConfigError(f"fibers/{i}: displacement_length must match fix")
            model.fix_node(node, comps, disp)
        for ld in fib.get("loads", []):
            node = nodes[ld["node"]]
            model.f_ext[6 * node:6 * node + 3] += ld["force_force"]
        if "in_plane" in fib:
            n = _PLANE_NORMAL[fib["in_plane"]]
            model.fix_node(nodes, [n, n + 3])
    if "interaction" in cfg:
        ia = cfg["interaction"]
        cutoff = ia.get("cutoff_length", "inf")
        q = cfg["quadrature"]
        model.interaction = Interaction(
            build_law(cfg), QuadratureRule(q["segments"], q["points"]),
            cutoff=math.inf if cutoff == "inf" else float(cutoff),
            exclude=ia.get("exclude", "same_fiber"),
            scale_with_load=ia.get("scale_with_load", True))
    return model


# --------------------------------------------------------------------------
# post-processing
# --------------------------------------------------------------------------


def fiber_centerline(model: Model, X: np.ndarray, fid: int, samples: int = 11) -> np.ndarray:
    xi = np.linspace(-1.0, 1.0, samples)
    pts = []
    for k, e in enumerate(model.fibers[fid]):
        r = eval_centerline(model.beam_element(model.elements[e], X), xi)[0]
        pts.append(r if k == 0 else r[1:])
    return np.vstack(pts)


def gauss_line_loads(model: Model, X: np.ndarray, lam: float) -> dict:
    """Element index to (positions, line loads) at its quadrature points, summed over partners."""
    ia = model.interaction
    out = {}
    if ia is None:
        return out
    law = ia.law.scaled(lam) if ia.scale_with_load else ia.law
    elems = [model.beam_element(e, X) for e in model.elements]
    for i, j in find_pairs(model, X):
        r1, f1, r2, f2 = line_loads(elems[i], elems[j], law, ia.rule)
        for idx, r, f in ((i, r1, f1), (j, r2, f2)):
            if idx in out:
                out[idx][1][:] += f
            else:
                out[idx] = (r, f.copy())
    return out


def min_gap(model: Model, X: np.ndarray) -> float:
    """Smallest surface gap between quadrature points of interacting element pairs."""
    ia = model.interaction
    if ia is None:
        return math.inf
    elems = [model.beam_element(e, X) for e in model.elements]
    best = math.inf
    for i, j in find_pairs(model, X):
        s1, s2 = sample(elems[i], ia.rule), sample(elems[j], ia.rule)
        d = np.linalg.norm(s1.r[:, None] - s2.r[None], axis=-1)
        best = min(best, float(d.min()) - elems[i].radius - elems[j].radius)
    return best


def _check(passed: bool, value, tolerance) -> dict:
    return {"passed": bool(passed), "value": value, "tolerance": tolerance}


def run_checks(cfg: dict, model: Model, history: list[StepRecord], scale: float = 1.0) -> dict:
    checks = {}
    wanted = cfg["checks"]
    if not history:
        return checks
    if "momentum_balance" in wanted:
        tol = wanted["momentum_balance"] * scale
        worst = max(r.momentum_imbalance for r in history)
        checks["momentum_balance"] = _check(worst <= tol, worst, tol)
    if "mirror_symmetry" in wanted:
        ms = wanted["mirror_symmetry"]
        a = _COMP[ms["axis"]]
        tol = ms["tolerance_length"] * scale
        worst = max(_mirror_error(model, r.X, a, ms["plane_length"]) for r in history)
        checks["mirror_symmetry"] = _check(worst <= tol, worst, tol)
    if "zero_reaction" in wanted:
        zr = wanted["zero_reaction"]
        c = _COMP[zr["component"]]
        tol = zr["tolerance_force"] * scale
        worst = max((abs(v[c]) for r in history for v in r.reactions.values()), default=0.0)
        checks["zero_reaction"] = _check(worst <= tol, worst, tol)
    if wanted.get("positive_gap"):
        g = min(min_gap(model, r.X) for r in history)
        checks["positive_gap"] = _check(g > 0, g, 0.0)
    if "load_symmetry" in wanted:
        ls = wanted["load_symmetry"]
        tol = ls["tolerance"] * scale
        worst = max(_load_symmetry_error(model, r.X, r.load_factor, _COMP[ls["axis"]]) for r in history)
        checks["load_symmetry"] = _check(worst <= tol, worst, tol)
    return checks


def _mirror_error(model: Model, X: np.ndarray, axis: int, plane: float) -> float:
    """Deviation of fiber pairs (0,1), (2,3), ... from mirror images across a plane."""
    Xn = X.reshape(-1, 6)
    flip = np.ones(6)
    flip[axis] = flip[axis + 3] = -1.0
    worst = 0.0
    for f in range(0, len(model.fibers) - 1, 2):
        a = Xn[model.fiber_nodes(f)]
        b = Xn[model.fiber_nodes(f + 1)].copy()
        b = b * flip
        b[:, axis] += 2 * plane
        worst = max(worst, float(np.abs(a - b).max()))
    return worst


def _load_symmetry_error(model: Model, X: np.ndarray, lam: float, axis: int) -> float:
    """Deviation of the line load on each deformable fiber from half-turn symmetry.

    A half turn about ``axis`` through the fiber midpoint maps quadrature
    point ``k`` of element ``e`` onto point ``K-1-k`` of element ``n-1-e`` and
    flips the two load components normal to the axis. Relative to the largest
    load on the fiber.
    """
    loads = gauss_line_loads(model, X, lam)
    flip = -np.ones(3)
    flip[axis] = 1.0
    worst = 0.0
    for members in model.fibers:
        if model.elements[members[0]].elastic is None or not all(m in loads for m in members):
            continue
        f = np.stack([loads[m][1] for m in members])
        fm = f[::-1, ::-1] * flip
        scale = np.abs(f).max()
        if scale > 0:
            worst = max(worst, float(np.abs(f - fm).max() / scale))
    return worst


# --------------------------------------------------------------------------
# running and writing
# --------------------------------------------------------------------------


def run_scenario(cfg: dict, out_dir=None, tolerance_scale: float = 1.0) -> ScenarioResult:
    model = build_model(cfg)
    scfg = solver_config(cfg)
    history: list[StepRecord] = []
    error = None
    try:
        adaptive_load_stepping(model, scfg, cfg["load"]["targets"], on_step=history.append)
    except LoadSteppingAborted as exc:
        last = history[-1].load_factor if history else 0.0
        error = f"{exc} (after {len(history)} converged steps, last load factor {last:.6g})"
        log.error("%s: %s", cfg["name"], error)
    res = ScenarioResult(cfg["name"], model, history, run_checks(cfg, model, history, tolerance_scale), error)
    if out_dir is not None:
        write_outputs(res, cfg, Path(out_dir))
    return res


def write_outputs(res: ScenarioResult, cfg: dict, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    model = res.model
    doc = {
        "name": res.name,
        "config": cfg,
        "status": "ok" if res.error is None else "aborted",
        "error": res.error,
        "total_newton_iterations": total_iterations(res.history),
        "steps": [r.to_json() for r in res.history],
        "checks": res.checks,
        "passed": res.passed,
    }
    with open(out / "log.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    samples = cfg["outputs"]["centerline_samples"]
    with open(out / "centerlines.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# fiber x y z\n")
        for fid in range(len(model.fibers)):
            if fid:
                fh.write("\n")
            for p in fiber_centerline(model, res.X, fid, samples):
                fh.write(f"{fid} {p[0]:.16e} {p[1]:.16e} {p[2]:.16e}\n")
    lam = res.history[-1].load_factor if res.history else 0.0
    loads = gauss_line_loads(model, res.X, lam)
    with open(out / "line_loads.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["load_factor", "fiber", "element", "point", "x", "y", "z", "fx", "fy", "fz"])
        for e in sorted(loads):
            r, f = loads[e]
            for k in range(len(r)):
                w.writerow([f"{lam:.17g}", model.elements[e].fiber, e, k,
                            *(f"{v:.17g}" for v in r[k]), *(f"{v:.17g}" for v in f[k])])
