"""Acceptance criteria at their stated tolerances, one summary line each."""

import json
import math
import time

import numpy as np
import pytest

from ssip import config, scenarios
from ssip.bench import run_complexity_bench, slope, speedups
from ssip.potentials import default_reg_gap
from ssip.verification import (broadphase_check, fd_check, langbein_sweep, lj_table, loglog_slope,
                               verify_cylinders, verify_disks)


def bundled(name, **edits):
    with open(config.bundled_scenarios()[name], encoding="utf-8") as fh:
        doc = json.load(fh)
    doc.update(edits)
    return doc


def failed(checks):
    return [c.line() for c in checks if not c.passed]


@pytest.fixture(scope="module")
def vdw_disks():
    t0 = time.perf_counter()
    rows, checks = verify_disks("vdw", "parallel")
    return rows, checks, time.perf_counter() - t0


@pytest.fixture(scope="module")
def charged_sweep():
    out = {}
    for n in (10, 32):
        doc = bundled("charged_beams", quadrature={"segments": 2, "points": n})
        out[n] = scenarios.run_scenario(config.validate(doc))
    return out


def test_lj_constants(report):
    t0 = time.perf_counter()
    _, checks = lj_table()
    dt = time.perf_counter() - t0
    worst = max(abs(c.value) for c in checks)
    ok = report(1, "LJ characteristic constants", not failed(checks) and dt < 1.0,
                f"worst relative deviation {worst:.2e} (tol 1e-4), {dt:.3f} s (limit 1 s)")
    assert ok, failed(checks)


def test_vdw_disks(report, vdw_disks):
    rows, checks, dt = vdw_disks
    bad = failed(checks)
    ok = report(2, "disk-disk vdW laws", not bad,
                f"{len(checks) - len(bad)}/{len(checks)} checks in {dt:.0f} s"
                + (f"; failing: {'; '.join(bad)}" if bad else ""))
    assert ok, bad


def test_langbein_reduction(report, vdw_disks):
    rows4d = {r["g_over_R"]: r["value"] for r in vdw_disks[0]}
    overlap = [g for g in rows4d if g < 1.0]
    reduced = {r["g_over_R"]: r["value"] for r in langbein_sweep(overlap + [1e-4, 2e-4])}
    worst = max(abs(reduced[g] / rows4d[g] - 1.0) for g in overlap)
    s = loglog_slope([1e-4, 2e-4], [reduced[1e-4], reduced[2e-4]])
    ok = report(3, "planar reduction", worst <= 5e-3 and abs(s + 2.5) <= 0.02,
                f"max deviation from 4D {worst:.2e} (tol 5e-3), slope at 1e-4 {s:.5f} (-2.5 +- 0.02)")
    assert ok


def test_charged_cylinders(report):
    t0 = time.perf_counter()
    errs, bad = {}, []
    for orient in ("parallel", "perpendicular"):
        rows, checks = verify_cylinders("electrostatic", orient, refine=False)
        errs[orient] = rows[0]["relative_error_vs_analytic"]
        bad += failed(checks)
    dt = time.perf_counter() - t0
    ok = report(4, "charged cylinders", not bad and dt < 300,
                f"parallel {errs['parallel']:.4%} (tol 0.3%), perpendicular {errs['perpendicular']:.4%}"
                f" (tol 0.03%), {dt:.0f} s (limit 300 s)")
    assert ok, bad


def test_fd_consistency(report):
    t0 = time.perf_counter()
    rows, checks = fd_check(n_configs=20)
    dt = time.perf_counter() - t0
    worst = max(max(r["residual_error"], r["stiffness_error"]) for r in rows)
    ok = report(5, "gradient and stiffness consistency", not failed(checks) and dt < 60,
                f"{len(rows)} configurations, worst relative error {worst:.2e}, {dt:.1f} s (limit 60 s)")
    assert ok, failed(checks)


def test_momentum_balance(report, charged_sweep):
    rep = scenarios.run_scenario(config.validate(bundled("repulsive_lj_crossed")))
    states = rep.history + charged_sweep[10].history
    worst = max(r.momentum_imbalance for r in states)
    ok = report(6, "momentum balance", rep.error is None and worst <= 1e-10,
                f"worst normalized force sum {worst:.2e} over {len(states)} converged states (tol 1e-10)")
    assert ok


def test_charged_beams(report, charged_sweep):
    one = scenarios.run_scenario(config.validate(bundled("charged_beams", load={"targets": [0.4]})))
    h = one.history
    single = (one.error is None and len(h) == 1 and h[0].residual_norm < 1e-10
              and h[0].increment_norm < 1e-8)
    coarse, fine = charged_sweep[10], charged_sweep[32]
    model = coarse.model
    sym = max(scenarios._mirror_error(model, r.X, 0, 2.5) for r in coarse.history)
    react = max(abs(v[1]) for r in coarse.history for v in r.reactions.values())
    mids = [model.fiber_nodes(f)[len(model.fiber_nodes(f)) // 2] for f in range(2)]
    dofs = [6 * n + c for n in mids for c in range(3)]
    quad = max(float(np.abs(a.X[dofs] - b.X[dofs]).max()) for a, b in zip(coarse.history, fine.history))
    ok = report(7, "charged parallel beams",
                single and sym <= 1e-8 and react <= 1e-9 and quad <= 1e-8
                and len(coarse.history) == len(fine.history) == 10,
                f"k=0.4 in {len(h)} step(s) with {h[0].iterations} iterations, symmetry {sym:.1e}, "
                f"vertical reactions {react:.1e}, quadrature difference {quad:.1e}")
    assert ok


def test_regularization_equivalence(report):
    runs = {}
    for mode in ("off", "auto"):
        doc = bundled("adhesive_lj")
        doc["interaction"]["regularization_gap_length"] = mode
        runs[mode] = scenarios.run_scenario(config.validate(doc))
    full, reg = runs["off"], runs["auto"]
    g_reg = default_reg_gap(bundled("adhesive_lj")["interaction"]["r_eq_length"])
    gmin = min(scenarios.min_gap(full.model, r.X) for r in full.history)
    diff = float(np.abs(full.X - reg.X).max())
    it_full = sum(r.iterations for r in full.history)
    it_reg = sum(r.iterations for r in reg.history)
    ok = report(8, "regularization equivalence",
                full.error is None and reg.error is None and gmin > g_reg and diff <= 1e-12
                and it_reg < it_full,
                f"min gap {gmin:.4e} > g_reg {g_reg:.4e}, max DOF difference {diff:.1e}, "
                f"Newton iterations {it_reg} regularized vs {it_full} full")
    assert ok


def test_complexity(report):
    recs = run_complexity_bench()
    s = slope(recs)
    at10 = {n: v for n, v, _ in speedups(recs)}[10]
    ok = report(9, "complexity benchmark", abs(s - 4.0) <= 0.5 and at10 > 1e3,
                f"slope {s:.3f} (4 +- 0.5), speedup at n_T=10 {at10:.0f} (> 1e3)")
    assert ok


def test_broadphase(report):
    rows, checks = broadphase_check(n_configs=100)
    within = sum(r["pairs_within_cutoff"] for r in rows)
    ok = report(10, "broad-phase completeness", checks[0].passed,
                f"{int(checks[0].value)} missed of {within} pairs within cutoff over {len(rows)} configurations")
    assert ok
