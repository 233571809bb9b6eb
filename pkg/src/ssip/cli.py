"""Command line: ``ssip <verb> [options]``; exit status 0 only if every check passes."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import config as config_mod
from .quadrature import QuadratureRule


def _write_csv(path: Path, rows: list[dict], lead=("g_over_R", "value", "reference_case",
                                                  "relative_error_vs_analytic")):
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = [c for c in lead if any(c in r for r in rows)]
    for r in rows:
        cols += [k for k in r if k not in cols]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (f"{v:.17g}" if isinstance(v, float) else v) for k, v in r.items()})


def _report(checks) -> int:
    for c in checks:
        print(c.line())
    ok = all(c.passed for c in checks)
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return 0 if ok else 1


def _gaps(text):
    return None if text is None else [float(x) for x in text.split(",")]


def _rule(args, default: QuadratureRule) -> QuadratureRule:
    return QuadratureRule(args.gauss_segments or default.n_segments, args.gauss_points or default.n_gp)


def cmd_verify_disks(args) -> int:
    from .verification import verify_disks
    rows, checks = verify_disks(args.family, args.orientation, _gaps(args.gaps),
                                tolerance_scale=args.tolerance_scale)
    _write_csv(Path(args.out) / f"disks_{args.family}_{args.orientation}.csv", rows)
    return _report(checks)


def cmd_verify_planar(args) -> int:
    from .verification import _check, langbein_sweep, loglog_slope
    gaps = _gaps(args.gaps) or [1e-4, 2e-4, 1e-3, 5e-3, 1e-2, 5e-2, 0.1]
    rows = langbein_sweep(gaps)
    _write_csv(Path(args.out) / "disks_vdw_planar.csv", rows)
    checks = [_check(f"refinement delta g/R={r['g_over_R']:g}", r["refinement_delta"], 1e-4,
                     args.tolerance_scale) for r in rows]
    if len(rows) >= 2:
        s = loglog_slope([rows[0]["g_over_R"], rows[1]["g_over_R"]], [rows[0]["value"], rows[1]["value"]])
        checks.append(_check(f"slope at g/R={rows[0]['g_over_R']:g} {s:.5f} vs -5/2", s + 2.5, 0.02,
                             args.tolerance_scale))
    return _report(checks)


def cmd_verify_cylinders(args) -> int:
    from .verification import verify_cylinders
    rule = _rule(args, QuadratureRule(1, 5))
    rows, checks = verify_cylinders(args.family, args.orientation, args.zeta, _gaps(args.gaps),
                                    args.elements, rule, refine=not args.no_refine,
                                    tolerance_scale=args.tolerance_scale)
    _write_csv(Path(args.out) / f"cylinders_{args.family}_{args.orientation}.csv", rows)
    return _report(checks)


def cmd_lj_table(args) -> int:
    from .verification import lj_table
    rows, checks = lj_table(args.tolerance_scale)
    _write_csv(Path(args.out) / "lj_characteristics.csv", rows)
    print(f"{'geometry':<10}{'equilibrium':>14}{'force-min at':>14}{'|force min|':>14}")
    for r in rows:
        print(f"{r['geometry']:<10}{r['equilibrium']:>14.7f}{r['force_min_location']:>14.7f}"
              f"{r['force_min_magnitude']:>14.7f}")
    return _report(checks)


def cmd_fd_check(args) -> int:
    from .verification import FD_FAMILIES, fd_check
    fams = FD_FAMILIES if args.families is None else args.families.split(",")
    rule = _rule(args, QuadratureRule(2, 6))
    rows, checks = fd_check(fams, args.configs, args.seed, rule=rule, tolerance_scale=args.tolerance_scale)
    _write_csv(Path(args.out) / "fd_check.csv", rows, lead=())
    return _report(checks)


def cmd_broadphase_check(args) -> int:
    from .verification import broadphase_check
    rows, checks = broadphase_check(args.configs, args.seed, exclude=args.exclude)
    _write_csv(Path(args.out) / "broadphase_check.csv", rows, lead=())
    return _report(checks)


def cmd_bench(args) -> int:
    from .bench import run_complexity_bench, slope, speedups
    from .verification import Check
    recs = run_complexity_bench(runs=args.runs)
    _write_csv(Path(args.out) / "complexity_bench.csv", [r.row() for r in recs], lead=())
    print(f"{'n_T':>4}{'speedup':>14}{'n_T^4':>10}")
    sp = speedups(recs)
    for n, s, p in sp:
        print(f"{n:>4}{s:>14.1f}{p:>10.0f}")
    s = slope(recs)
    at10 = dict((n, v) for n, v, _ in sp).get(10)
    checks = [Check(f"speedup slope {s:.3f} vs 4", s - 4.0, 0.5 * args.tolerance_scale,
                    abs(s - 4.0) <= 0.5 * args.tolerance_scale)]
    if at10 is not None:
        checks.append(Check("speedup at n_T=10 above 1e3", at10, 1e3, at10 > 1e3))
    return _report(checks)


def cmd_run(args) -> int:
    from .scenarios import run_scenario
    if args.config is None:
        print("run needs --config PATH (bundled: " + ", ".join(config_mod.bundled_scenarios()) + ")",
              file=sys.stderr)
        return 2
    path = Path(args.config)
    if not path.exists() and args.config in config_mod.bundled_scenarios():
        path = config_mod.bundled_scenarios()[args.config]
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if args.gauss_segments or args.gauss_points:
        q = doc.setdefault("quadrature", {})
        if args.gauss_segments:
            q["segments"] = args.gauss_segments
        if args.gauss_points:
            q["points"] = args.gauss_points
    if args.cutoff is not None and "interaction" in doc:
        doc["interaction"]["cutoff_length"] = "inf" if args.cutoff == "inf" else float(args.cutoff)
    if args.reg_gap is not None and "interaction" in doc:
        doc["interaction"]["regularization_gap_length"] = (
            args.reg_gap if args.reg_gap in ("auto", "off") else float(args.reg_gap))
    if args.targets is not None:
        doc.setdefault("load", {})["targets"] = [float(x) for x in args.targets.split(",")]
    try:
        cfg = config_mod.validate(doc)
        out = Path(args.out) / cfg["name"]
        res = run_scenario(cfg, out, args.tolerance_scale)
    except config_mod.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(f"{cfg['name']}: {len(res.history)} converged steps, "
          f"{sum(r.iterations for r in res.history)} Newton iterations, outputs in {out}")
    if res.error:
        print(f"FAIL solver: {res.error}")
    for name, c in res.checks.items():
        print(f"{'PASS' if c['passed'] else 'FAIL'} {name}: {c['value']:.6g} (tolerance {c['tolerance']:.6g})")
    return 0 if res.passed else 1


def cmd_schema(args) -> int:
    print(config_mod.schema_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario config (JSON) or bundled scenario name")
    common.add_argument("--out", default="results", help="output directory")
    common.add_argument("--gauss-segments", type=int, help="integration segments per element")
    common.add_argument("--gauss-points", type=int, help="Gauss points per segment")
    common.add_argument("--cutoff", help="interaction cutoff length or 'inf'")
    common.add_argument("--reg-gap", help="regularization gap, 'auto' or 'off'")
    common.add_argument("--tolerance-scale", type=float, default=1.0, help="multiply all check tolerances")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ssip", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("verify-disks", parents=[common], help="section laws vs disk integrals")
    s.add_argument("--family", choices=["vdw", "electrostatic"], default="vdw")
    s.add_argument("--orientation", choices=["parallel", "perpendicular"], default="parallel")
    s.add_argument("--gaps", help="comma-separated g/R values")
    s.set_defaults(func=cmd_verify_disks)

    s = sub.add_parser("verify-planar", parents=[common], help="coplanar disks by the 2D-reduced integral")
    s.add_argument("--gaps", help="comma-separated g/R values, smallest first")
    s.set_defaults(func=cmd_verify_planar)

    s = sub.add_parser("verify-cylinders", parents=[common], help="double line integral vs nested rings")
    s.add_argument("--family", choices=["vdw", "electrostatic"], default="electrostatic")
    s.add_argument("--orientation", choices=["parallel", "perpendicular"], default="parallel")
    s.add_argument("--zeta", type=float, default=50.0, help="slenderness L/R")
    s.add_argument("--elements", type=int, default=64)
    s.add_argument("--gaps", help="comma-separated g/R values")
    s.add_argument("--no-refine", action="store_true", help="skip the ring-rule refinement check")
    s.set_defaults(func=cmd_verify_cylinders)

    s = sub.add_parser("lj-table", parents=[common], help="LJ characteristic constants")
    s.set_defaults(func=cmd_lj_table)

    s = sub.add_parser("fd-check", parents=[common], help="finite-difference residual/stiffness checks")
    s.add_argument("--families", help="comma-separated subset of law families")
    s.add_argument("--configs", type=int, default=20, help="random configurations per family")
    s.add_argument("--seed", type=int, default=12345)
    s.set_defaults(func=cmd_fd_check)

    s = sub.add_parser("broadphase-check", parents=[common], help="bucket grid vs all-pairs search")
    s.add_argument("--configs", type=int, default=100, help="random fiber configurations")
    s.add_argument("--seed", type=int, default=2024)
    s.add_argument("--exclude", choices=["adjacent", "same_fiber", "none"], default="adjacent")
    s.set_defaults(func=cmd_broadphase_check)

    s = sub.add_parser("run", parents=[common], help="run a scenario config")
    s.add_argument("--targets", help="comma-separated load factor targets")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("bench", parents=[common], help="section law vs 4D integration cost")
    s.add_argument("--runs", type=int, default=5)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("schema", help="print the scenario config schema")
    s.set_defaults(func=cmd_schema)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
