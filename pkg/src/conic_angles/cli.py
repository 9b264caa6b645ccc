"""Command-line front end: exact tables, single estimators, verification bundles.

Exit codes: 0 success, 2 usage or input error, 3 a statistical check
exceeded its z threshold, 4 internal solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np

from . import exact, mc
from .cones import parse_cone_literal
from .feasible import SolverError
from .linalg import RngStream

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CHECK_FAILED = 3
EXIT_SOLVER = 4

ESTIMATE_KINDS = ("absorption", "grassmann", "solid-angle", "persistence",
                  "intrinsic-mgf", "intrinsic-steiner", "angle-sums")


def _fmt(x: float) -> float:
    return float(f"{x:.12g}")


def _rational_row(fractions: list[Fraction]) -> list[str]:
    return [f"{f.numerator}/{f.denominator}" if f.denominator != 1
            else f"{f.numerator}" for f in fractions]


def _write_output(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def cmd_exact(args) -> int:
    family, n = args.family, args.n
    if family == "orthant":
        v = exact.orthant_volume_fractions(n)
        g = exact.orthant_gamma_fractions(n)
    elif family == "weyl-b":
        v = exact.weyl_b_volume_fractions(n)
        g = exact.weyl_b_gamma_fractions(n)
    elif family == "subspace":
        ambient = args.ambient if args.ambient is not None else n
        v = [Fraction(1 if k == n else 0) for k in range(ambient + 1)]
        g = exact.subspace_gamma_fractions(n, ambient)
    else:
        raise ValueError(f"unknown family {family!r}; "
                         "choose orthant, weyl-b or subspace")

    table = {
        "family": family,
        "n": n,
        "v": _rational_row(v),
        "v_decimal": [_fmt(float(f)) for f in v],
        "gamma": _rational_row(g),
        "gamma_decimal": [_fmt(float(f)) for f in g],
    }
    if family == "subspace":
        table["ambient"] = args.ambient if args.ambient is not None else n
    if args.format == "json":
        _write_output(json.dumps(table, indent=2), args.out)
    else:
        lines = ["index,v,v_decimal,gamma,gamma_decimal"]
        for i in range(len(v)):
            lines.append(f"{i},{table['v'][i]},{table['v_decimal'][i]},"
                         f"{table['gamma'][i]},{table['gamma_decimal'][i]}")
        _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _report_text(reports: list[mc.ExperimentReport], args) -> tuple[str, bool]:
    passed = all(r.passed for r in reports)
    if args.format == "csv":
        lines = ["experiment,name,value,stderr,samples,exact,z,pass"]
        for report in reports:
            for est in report.estimates:
                z = est.z_score
                lines.append(",".join([
                    report.experiment,
                    est.name,
                    repr(est.value),
                    repr(est.stderr),
                    str(est.samples),
                    "" if est.exact_ref is None else repr(est.exact_ref),
                    "" if z is None else repr(z),
                    str(est.passes(report.z_max)).lower(),
                ]))
        return "\n".join(lines) + "\n", passed
    payload = [r.to_dict(include_timing=args.timing) for r in reports]
    if len(payload) == 1:
        return json.dumps(payload[0], indent=2), passed
    return json.dumps({"reports": payload, "pass": passed}, indent=2), passed


def cmd_estimate(args) -> int:
    stream = RngStream(args.seed)
    N = args.samples
    threads = args.threads
    kind = args.kind
    estimates: list[mc.Estimate] = []

    if kind in ("absorption", "grassmann", "solid-angle", "persistence",
                "intrinsic-mgf", "intrinsic-steiner"):
        if args.cone is None:
            raise ValueError(f"estimate {kind} needs --cone")
        cone = parse_cone_literal(args.cone)
        profile, volumes = mc._family_tables(args.cone)

    if kind == "absorption":
        if args.k is None:
            raise ValueError("estimate absorption needs --k")
        est = mc.estimate_absorption(cone.generators, args.k, N, stream, threads)
        ref = float(profile.values[args.k]) if profile is not None else None
        estimates.append(replace(est, name=f"absorption[k={args.k}]",
                                    exact_ref=ref))
    elif kind == "grassmann":
        if args.j is None:
            raise ValueError("estimate grassmann needs --j")
        est = mc.estimate_grassmann_subspace(cone, args.j, N, stream, threads)
        ref = float(profile.values[args.j]) if profile is not None else None
        estimates.append(replace(est, name=f"gamma[{args.j}]", exact_ref=ref))
    elif kind == "solid-angle":
        est = mc.estimate_solid_angle(cone, N, stream, threads)
        ref = None
        if profile is not None:
            ref = 0.5 * float(profile.values[cone.ambient_dim - 1])
        estimates.append(replace(est, name="alpha", exact_ref=ref))
    elif kind == "persistence":
        est = mc.estimate_persistence_v0(cone.generators, N, stream, threads)
        ref = float(volumes.values[0]) if volumes is not None else None
        estimates.append(replace(est, name="v0", exact_ref=ref))
    elif kind in ("intrinsic-mgf", "intrinsic-steiner"):
        grid = np.asarray(args.r_grid, dtype=float) if args.r_grid else None
        if kind == "intrinsic-mgf":
            vol, rows = mc.estimate_intrinsic_volumes_mgf(cone, grid, N,
                                                          stream, threads)
        else:
            vol, rows = mc.estimate_intrinsic_volumes_steiner(cone, grid, N,
                                                              stream, threads)
        estimates.extend(rows)
        estimates.extend(mc._volume_estimates(vol, volumes, N))
    elif kind == "angle-sums":
        missing = [f for f in ("n", "k", "ell", "j")
                   if getattr(args, f) is None]
        if missing:
            raise ValueError(f"estimate angle-sums needs --{', --'.join(missing)}")
        gauss, regular = mc.estimate_face_angle_sums(
            args.n, args.k, args.ell, args.j, N, stream, threads)
        estimates.extend([gauss, regular])

    report = mc.ExperimentReport(
        experiment=f"estimate-{kind}",
        params={key: val for key, val in (
            ("cone", args.cone), ("n", args.n), ("k", args.k),
            ("j", args.j), ("ell", args.ell), ("samples", N),
        ) if val is not None},
        seed=args.seed, z_max=args.z_max, estimates=estimates,
        passed=all(e.passes(args.z_max) for e in estimates))
    text, passed = _report_text([report], args)
    _write_output(text, args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    if args.experiment == "all":
        reports = mc.run_all_experiments(seed=args.seed, samples=args.samples,
                                         z_max=args.z_max, threads=args.threads)
    else:
        spec = mc.ExperimentSpec(
            experiment=args.experiment, cone=args.cone, n=args.n, k=args.k,
            j=args.j, ell=args.ell, samples=args.samples, seed=args.seed,
            r_grid=tuple(args.r_grid) if args.r_grid else None,
            z_max=args.z_max)
        reports = [mc.run_experiment(spec, threads=args.threads)]
    text, passed = _report_text(reports, args)
    _write_output(text, args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _comma_floats(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conic-angles",
        description="Exact conic intrinsic volumes and Grassmann angles, "
                    "with seeded Monte Carlo verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_exact = sub.add_parser("exact", help="print closed-form tables")
    p_exact.add_argument("family", choices=["orthant", "weyl-b", "subspace"])
    p_exact.add_argument("n", type=int)
    p_exact.add_argument("--ambient", type=int, default=None,
                         help="ambient dimension for subspace tables")
    p_exact.add_argument("--format", choices=["json", "csv"], default="json")
    p_exact.add_argument("--out", default=None)
    p_exact.set_defaults(func=cmd_exact)

    def add_common(p):
        p.add_argument("--cone", default=None,
                       help='cone literal, e.g. "orthant:3" or "weyl-b:2"')
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--j", type=int, default=None)
        p.add_argument("--ell", type=int, default=None)
        p.add_argument("--samples", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--threads", type=int,
                       default=max(os.cpu_count() or 1, 1))
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", default=None)
        p.add_argument("--z-max", dest="z_max", type=float, default=3.0)
        p.add_argument("--r-grid", dest="r_grid", type=_comma_floats,
                       default=None, help="comma-separated grid radii")
        p.add_argument("--timing", action="store_true",
                       help="include wall_time_ms in JSON reports "
                            "(off by default so reports are reproducible)")

    p_est = sub.add_parser("estimate", help="run a single estimator")
    p_est.add_argument("kind", choices=list(ESTIMATE_KINDS))
    add_common(p_est)
    p_est.set_defaults(func=cmd_estimate)

    p_ver = sub.add_parser("verify", help="run a named verification experiment")
    p_ver.add_argument("experiment",
                       choices=list(mc.EXPERIMENT_NAMES) + ["all"])
    add_common(p_ver)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, OverflowError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
