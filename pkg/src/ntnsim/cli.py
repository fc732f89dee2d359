"""Batch command-line front-end.

Subcommands: `run` (one scenario), `sweep` (one parameter over several
values, concatenated output), `selftest` (analytic-vs-Monte-Carlo oracle
suite), `schema` (print the config schema).  All metric computation lives
in the library; this module is argument plumbing and exit codes.

Exit codes: 0 success, 1 configuration/usage error, 2 runtime failure
(including a failing selftest).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from .scenarios import (  # noqa: F401 - tomllib re-export keeps 3.10 fallback in one place
    ConfigError,
    tomllib,
    ResultTable,
    ScenarioResult,
    _SCHEMA,
    apply_overrides,
    config_from_dict,
    config_schema_text,
    run_scenario,
    write_results,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ntnsim",
        description="Monte-Carlo simulator for aerial/satellite network scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_args(p):
        p.add_argument("--scenario", required=True, help="scenario config file (TOML)")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="dotted-path config override")
        p.add_argument("--trials", type=int, help="override trial count")
        p.add_argument("--seed", type=int,
                       help="override seed (default: config, else NTNSIM_SEED)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                       help="worker processes (output is independent of this)")

    p_run = sub.add_parser("run", help="run one scenario and write result files")
    add_run_args(p_run)

    p_sweep = sub.add_parser("sweep", help="run a scenario once per swept value")
    add_run_args(p_sweep)
    p_sweep.add_argument("--param", required=True, help="dotted config key to sweep")
    p_sweep.add_argument("--values", required=True, nargs="+", help="values to sweep over")

    p_self = sub.add_parser("selftest", help="run the analytic-vs-MC oracle suite")
    p_self.add_argument("--tolerance-scale", type=float, default=1.0,
                        help="multiply all tolerances (test hook)")

    sub.add_parser("schema", help="print the config schema")
    return parser


def _load_doc(args) -> dict:
    try:
        with open(args.scenario, "rb") as f:
            doc = tomllib.load(f)
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {args.scenario}")
    except Exception as exc:
        raise ConfigError(f"{args.scenario}: invalid TOML: {exc}")
    doc = apply_overrides(doc, args.overrides)
    if args.trials is not None:
        doc["trials"] = args.trials
    if args.seed is not None:
        doc["seed"] = args.seed
    return doc


def _default_seed():
    env = os.environ.get("NTNSIM_SEED")
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"NTNSIM_SEED must be an integer, got {env!r}")


def _summarize(table: ResultTable, out) -> None:
    # The headline column differs per table; report its range.
    col = {
        "availability": "availability",
        "capacity_cdf": "capacity_bps",
        "ee_cdf": "ee_bits_per_joule",
        "kcoverage": "probability",
    }.get(table.name)
    headline = table.columns.index(col) if col in table.columns else None
    if headline is not None and table.rows:
        vals = [row[headline] for row in table.rows]
        print(
            f"{table.name}: {len(table.rows)} rows, "
            f"min={min(vals):.6g}, max={max(vals):.6g}",
            file=out,
        )
    else:
        print(f"{table.name}: {len(table.rows)} rows", file=out)
    for label, flag in table.flags.items():
        print(f"{table.name}: {label}: {flag}", file=out)


def _cmd_run(args) -> int:
    doc = _load_doc(args)
    cfg = config_from_dict(doc, default_seed=_default_seed())
    result = run_scenario(cfg, workers=max(1, args.workers))
    write_results(result, args.out, fmt=args.format)
    for table in result.tables:
        _summarize(table, sys.stdout)
    return EXIT_OK


def _schema_node(param: str):
    node = _SCHEMA
    for part in param.split("."):
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(f"sweep param {param!r}: not a config schema key")
        node = node[part]
    return node


def _cmd_sweep(args) -> int:
    node = _schema_node(args.param)
    doc = _load_doc(args)
    parsed = []
    for raw in args.values:
        try:
            v = tomllib.loads(f"v = {raw}")["v"]
        except tomllib.TOMLDecodeError:
            v = raw
        if isinstance(node, list) and not isinstance(v, list):
            v = [v]
        parsed.append(v)

    col = args.param.rsplit(".", 1)[-1]
    combined: dict[str, ResultTable] = {}
    manifests = []
    for value in parsed:
        sub_doc = json.loads(json.dumps(doc))
        target = sub_doc
        parts = args.param.split(".")
        for p in parts[:-1]:
            target = target.setdefault(p, {})
        target[parts[-1]] = value
        cfg = config_from_dict(sub_doc, default_seed=_default_seed())
        result = run_scenario(cfg, workers=max(1, args.workers))
        manifests.append(result.manifest)
        scalar = value[0] if isinstance(value, list) and len(value) == 1 else value
        for table in result.tables:
            if col in table.columns:
                rows, columns, formats = table.rows, table.columns, table.formats
            else:
                columns = (col,) + table.columns
                formats = ("{}",) + table.formats
                rows = [(scalar,) + row for row in table.rows]
            if table.name not in combined:
                combined[table.name] = ResultTable(table.name, columns, [], formats, {})
            combined[table.name].rows.extend(rows)
            combined[table.name].flags.update(table.flags)
    out = ScenarioResult(
        list(combined.values()),
        {
            "sweep": {"param": args.param, "values": parsed},
            "runs": manifests,
        },
    )
    write_results(out, args.out, fmt=args.format)
    for table in out.tables:
        _summarize(table, sys.stdout)
    return EXIT_OK


# --- selftest ----------------------------------------------------------------


def _selftest_checks(scale: float):
    """Yield (name, observed, expected, tolerance) oracle comparisons."""
    from . import geom, metrics, pointproc
    from .channel import Nakagami, ShadowedRician, sample_fading
    from .geom import EARTH_RADIUS_KM, GeoPoint, SphericalCap
    from .rng import trial_rng

    rng = trial_rng(20260824, "selftest", 0)

    # 1. Cap area: Monte-Carlo hit fraction of a pi/3 cap vs the closed form.
    n = 200_000
    cap = SphericalCap(np.array([0.0, 0.0, 1.0]), math.pi / 3.0, EARTH_RADIUS_KM)
    dirs = pointproc._uniform_sphere_dirs(n, rng)
    frac = float(np.mean(dirs[:, 2] >= math.cos(cap.apex_angle / 2.0)))
    expect = geom.cap_area(cap) / (4.0 * math.pi * EARTH_RADIUS_KM**2)
    tol = 4.0 * math.sqrt(expect * (1.0 - expect) / n)
    yield "cap-area", frac, expect, tol * scale

    # 2. Null probability: P(at least one of n sphere satellites visible)
    # vs 1 - (1 - f)^n with f the exact visible-cap fraction.
    sat_r = 6921.0
    f_vis = (1.0 - math.cos(geom.max_visibility_angle(EARTH_RADIUS_KM, sat_r))) / 2.0
    n_sat, n_trials = 5, 40_000
    user = GeoPoint.from_vector(np.array([0.0, 0.0, EARTH_RADIUS_KM]))
    hits = 0
    for t in range(n_trials):
        r = trial_rng(20260824, "selftest/null", t)
        cons = pointproc.sample_bpp_sphere(n_sat, sat_r, r)
        if geom.visible_mask(user, cons.positions).any():
            hits += 1
    expect = metrics.analytic_bpp_availability(f_vis, n_sat)
    tol = 4.0 * math.sqrt(expect * (1.0 - expect) / n_trials)
    yield "null-probability", hits / n_trials, expect, tol * scale

    # 3. Fading moments: sample means vs analytic mean gains.
    for name, spec in (
        ("nakagami-mean", Nakagami(3.0, 1.0)),
        ("shadowed-rician-mean", ShadowedRician(0.126, 10.1, 0.835)),
    ):
        g = sample_fading(spec, rng, size=200_000)
        tol = 4.0 * float(np.std(g)) / math.sqrt(len(g))
        yield name, float(np.mean(g)), spec.mean_gain, tol * scale

    # 4. Pass duration: session-arc formula vs stepped orbit propagation.
    # Polar plane (the x-z plane); observer 0.2 rad off-plane toward +y.
    orbit_r, offset = 6921.0, 0.2
    plane = pointproc.OrbitPlane(math.pi / 2.0, 0.0, orbit_r)
    obs = GeoPoint.from_vector(
        EARTH_RADIUS_KM * np.array([math.cos(offset), math.sin(offset), 0.0])
    )
    us = np.linspace(0.0, 2.0 * math.pi, 2_000_001)
    pos = plane.positions(us)
    phi_max = geom.max_visibility_angle(EARTH_RADIUS_KM, orbit_r)
    cosang = pos @ obs.direction / orbit_r
    visible_frac = float(np.mean(cosang >= math.cos(phi_max)))
    propagated = visible_frac * metrics.orbital_period_s(orbit_r)
    analytic = metrics.pass_duration(orbit_r, EARTH_RADIUS_KM, offset)
    yield "pass-duration", propagated, analytic, max(1e-3 * analytic, 1e-9) * scale

    # 5. Cap sampler uniformity: KS test of cos(polar) within the cap.
    from scipy import stats

    cap2 = SphericalCap(np.array([0.0, 0.0, 1.0]), math.pi / 2.0, 1.0)
    d = pointproc._uniform_cap_dirs(50_000, cap2, rng)
    cos_half = math.cos(cap2.apex_angle / 2.0)
    u = (1.0 - d[:, 2]) / (1.0 - cos_half)
    pvalue = stats.kstest(u, "uniform").pvalue
    yield "cap-sampler-ks", pvalue, 0.5, (0.5 - 1e-4) * scale


def _cmd_selftest(args) -> int:
    scale = args.tolerance_scale
    t0 = time.monotonic()
    failed = 0
    for name, observed, expected, tol in _selftest_checks(scale):
        ok = abs(observed - expected) <= tol
        failed += not ok
        print(
            f"{'PASS' if ok else 'FAIL'}  {name:<22} "
            f"observed={observed:.6g} expected={expected:.6g} tol={tol:.3g}"
        )
    print(f"selftest: {'ok' if not failed else f'{failed} failure(s)'} "
          f"in {time.monotonic() - t0:.1f}s")
    return EXIT_OK if not failed else EXIT_RUNTIME


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "selftest":
            return _cmd_selftest(args)
        if args.command == "schema":
            sys.stdout.write(config_schema_text())
            return EXIT_OK
        return EXIT_CONFIG  # pragma: no cover
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit 2
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
