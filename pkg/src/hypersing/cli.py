"""Command-line front end: identity suites, solvers, inversion, majorant pipeline.

Reports are machine-readable: JSON with stable key order for structured
results, CSV (UTF-8, LF, header row) for time series. Identical configs
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .errors import ConfigError, FitError, HypersingError, ParadoxInconclusive, PoleError
from .grid import GridFunction, graded_grid
from .kernel_algebra import PhiKernel, conv_positive, semigroup_check
from .laplace import InversionConfig, LaplaceImage, invert, phi_image
from .nsp import InitialData, run_paradox
from .special_functions import beta as beta_fn
from .special_functions import gamma
from .volterra import FORCINGS, VolterraProblem, make_problem, solve_laplace, solve_picard


def _write_json(path, payload: dict):
    text = json.dumps(payload, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _write_csv(path, header, rows):
    fh = sys.stdout if path is None or path == "-" else open(path, "w", encoding="utf-8", newline="")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{x:.12g}" if isinstance(x, float) else x for x in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _grid_from_args(args) -> np.ndarray:
    if args.T <= 0:
        raise ConfigError("T: horizon must be positive")
    if args.points < 2:
        raise ConfigError("points: need at least 2 sample points")
    if args.grading < 1:
        raise ConfigError("grading: exponent must be >= 1")
    return graded_grid(args.T, args.points, args.grading)


def cmd_verify_identities(args) -> int:
    grid = _grid_from_args(args)
    b = GridFunction.from_callable(lambda t: np.exp(-t), grid)
    checks = []

    pairs = [(0.5, 0.5), (0.75, 0.75), (0.25, 1.5), (1.0, 1.0)]
    if args.lam is not None:
        if args.lam <= 0 and abs(args.lam - round(args.lam)) < 1e-9:
            raise ConfigError(f"lambda: order {args.lam} sits on a pole")
        pairs.append((args.lam, 0.5))
    for lam, mu in pairs:
        try:
            err = float(semigroup_check(lam, mu, b))
        except PoleError as exc:
            raise ConfigError(f"lambda: {exc}") from exc
        checks.append({"check": f"semigroup({lam},{mu})", "max_error": err,
                       "tolerance": args.tol, "pass": err <= args.tol})

    delta_err = float(semigroup_check(0.25, -0.25, b))
    checks.append({"check": "delta(0.25,-0.25)", "max_error": delta_err,
                   "tolerance": 1e-3, "pass": delta_err <= 1e-3})

    zs = np.linspace(0.05, 0.95, 19)
    refl = float(max(abs(gamma(z) * gamma(1 - z) - math.pi / math.sin(math.pi * z))
                     / abs(math.pi / math.sin(math.pi * z)) for z in zs))
    checks.append({"check": "reflection", "max_error": refl, "tolerance": 1e-10, "pass": refl <= 1e-10})

    zs = np.linspace(0.1, 5.0, 50)
    dup = float(max(abs(2 ** (2 * z - 1) * gamma(z) * gamma(z + 0.5) - math.sqrt(math.pi) * gamma(2 * z))
                    / abs(math.sqrt(math.pi) * gamma(2 * z)) for z in zs))
    checks.append({"check": "duplication", "max_error": dup, "tolerance": 1e-10, "pass": dup <= 1e-10})

    beta_err = float(max(abs(beta_fn(0.5, 0.5) - math.pi), abs(beta_fn(2, 3) - 1 / 12.0),
                         abs(beta_fn(1.3, 2.7) - beta_fn(2.7, 1.3))))
    checks.append({"check": "beta", "max_error": beta_err, "tolerance": 1e-12, "pass": beta_err <= 1e-12})

    report = {
        "command": "verify-identities",
        "version": __version__,
        "config": {"T": args.T, "points": args.points, "grading": args.grading, "tol": args.tol},
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    _write_json(args.out, report)
    return 0 if report["pass"] else 1


def _load_forcing_csv(path) -> GridFunction:
    ts, vs = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ConfigError("b0-file: empty CSV")
        for row in reader:
            ts.append(float(row[0]))
            vs.append(float(row[1]))
    ts = np.asarray(ts)
    if ts.size < 2 or ts[0] != 0.0 or np.any(np.diff(ts) <= 0):
        raise ConfigError("b0-file: t column must start at 0 and increase strictly")
    return GridFunction(ts, np.asarray(vs))


def cmd_solve(args) -> int:
    if args.c <= 0:
        raise ConfigError("c: equation constant must be positive")
    if args.b0_file is not None:
        b0 = _load_forcing_csv(args.b0_file)
        prob = VolterraProblem(b0=b0, c=args.c)
    else:
        if args.b0 not in FORCINGS:
            raise ConfigError(f"b0: unknown forcing '{args.b0}'")
        prob = make_problem(args.b0, args.c, _grid_from_args(args))

    bp, _cert = solve_picard(prob, tol=args.tol)
    # args.tol drives the picard iteration; the inversion cross-check keeps its
    # own floor so a tight picard tolerance does not over-constrain the contours
    bl = solve_laplace(prob, InversionConfig(method=args.method, tol=1e-8))
    diff = np.abs(bp.values - bl.values)

    rows = [(float(t), float(p), float(l), float(d))
            for t, p, l, d in zip(bp.grid, bp.values, bl.values, diff)]
    _write_csv(args.out, ["t", "b_picard", "b_laplace", "abs_diff"], rows)

    late = bp.grid >= 0.1
    worst = float(np.max(diff[late])) if np.any(late) else float(np.max(diff))
    return 0 if worst <= args.route_tol else 1


def cmd_invert(args) -> int:
    if args.lam is None:
        raise ConfigError("lambda: an image order is required")
    if args.lam <= 0 and abs(args.lam - round(args.lam)) < 1e-9:
        raise ConfigError(f"lambda: order {args.lam} sits on a pole")
    image = LaplaceImage(lambda p: phi_image(args.lam, p))
    cfg = InversionConfig(method=args.method, tol=args.tol)
    ts = np.linspace(args.T / args.points, args.T, args.points)
    rows = [(float(t), invert(image, float(t), cfg)) for t in ts]
    _write_csv(args.out, ["t", "value"], rows)
    return 0


def cmd_nsp_paradox(args) -> int:
    if args.amplitude < 0:
        raise ConfigError("amplitude: must be nonnegative")
    if args.width <= 0 or args.nu <= 0:
        raise ConfigError("width/nu: must be positive")
    if args.c <= 0:
        raise ConfigError("c: equation constant must be positive")
    data = InitialData(amplitude=args.amplitude, width=args.width, nu=args.nu)
    grid = _grid_from_args(args)
    try:
        report = run_paradox(data, args.c, grid, InversionConfig(tol=min(args.tol, 1e-8)))
    except (ParadoxInconclusive, FitError) as exc:
        _write_json(args.out, {"command": "nsp-paradox", "version": __version__,
                               "error": str(exc), "pass": False})
        return 1

    payload = {
        "command": "nsp-paradox",
        "version": __version__,
        "config": {"amplitude": args.amplitude, "width": args.width, "nu": args.nu,
                   "c": args.c, "T": args.T, "points": args.points,
                   "grading": args.grading, "tol": args.tol},
        "b0_at_zero": report.b0_at_zero,
        "beta_sup": report.sup_beta,
        "exponent": None if report.trivial else report.beta_small_t_exponent,
        "exponent_ci": None if report.trivial else report.exponent_ci,
        "prefactor": None if report.trivial else report.beta_small_t_prefactor,
        "expected_prefactor": None if report.trivial else report.expected_prefactor,
        "kernel_bound_constant": report.kernel_bound_constant,
        "denominator_inf": report.denominator_inf,
        "route_discrepancy": report.route_discrepancy,
        "trivial": report.trivial,
        "pass": report.passed,
    }
    _write_json(args.out, payload)
    return 0 if report.passed else 1


def cmd_bench(args) -> int:
    grid = graded_grid(5.0, args.points, 4.0)
    b = GridFunction.from_callable(lambda t: np.exp(-t), grid)
    timings = {}

    t0 = time.perf_counter()
    conv_positive(PhiKernel(0.5), b)
    timings["conv_positive_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    prob = make_problem("exp", 1.0, grid)
    solve_picard(prob)
    timings["solve_picard_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    image = LaplaceImage(lambda p: phi_image(0.5, p))
    for t in (0.5, 1.0, 2.0):
        invert(image, t, InversionConfig(method="talbot"))
    timings["talbot_3pts_s"] = time.perf_counter() - t0

    _write_json(args.out, {"command": "bench", "version": __version__,
                           "points": args.points, "timings": timings})
    return 0


def _add_grid_args(p, T=5.0, points=2048, grading=4.0):
    p.add_argument("--T", type=float, default=T, help="time horizon")
    p.add_argument("--points", type=int, default=points, help="number of grid cells")
    p.add_argument("--grading", type=float, default=grading,
                   help="grid grading exponent (1 = uniform)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypersing",
                                     description="Hyper-singular convolutions, Volterra solvers, and the majorant pipeline")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-identities", help="run the kernel-algebra identity suite")
    _add_grid_args(p)
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="extra order to include")
    p.add_argument("--tol", type=float, default=1e-6, help="semigroup tolerance")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("solve", help="solve the order -1/4 integral equation by both routes")
    _add_grid_args(p)
    p.add_argument("--b0", default="exp", help="built-in forcing: exp, texp, gauss")
    p.add_argument("--b0-file", default=None, help="CSV file of (t, value) rows")
    p.add_argument("--c", type=float, default=1.0, help="equation constant")
    p.add_argument("--method", choices=["bromwich", "talbot", "both"], default="both")
    p.add_argument("--tol", type=float, default=1e-10, help="picard tolerance")
    p.add_argument("--route-tol", type=float, default=1e-3,
                   help="max allowed route discrepancy for t >= 0.1")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("invert", help="invert the power-kernel image p**(-lambda)")
    _add_grid_args(p, points=50)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--method", choices=["bromwich", "talbot", "both"], default="both")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("nsp-paradox", help="run the majorant pipeline and emit the paradox report")
    _add_grid_args(p, T=20.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_nsp_paradox)

    p = sub.add_parser("bench", help="time the core kernels")
    p.add_argument("--points", type=int, default=1024)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except HypersingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
