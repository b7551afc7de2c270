"""Command-line front end.

Subcommands mirror the library surface:

    eq         capacity, gap polynomial, and gap zeros of a set
    green      Green's function values at given points
    comb       comb geometry as JSON {"u": [...], "v": [...], "eta0": ...}
    remez      minimax errors, CSV "n,error,iterations"
    rate       scaled-error ladder and extrapolated limit
    verify     bound suite for one set or for randomized sets
    dichotomy  rate/Lipschitz table along a middle-gap exhaustion

Sets are written "a1,b1;a2,b2;..."; degree ranges are "a:b:even",
"a:b:all", or comma-separated lists.  Exit codes: 0 success, 2 usage
error, 3 numerical failure, 4 failed bound verification.  Output is
deterministic: floats are printed with 17 significant digits and JSON
keys in a fixed order.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .asymptotics import DEFAULT_DEGREES, sigma_alpha, vt_check, RateReport
from .comb_map import comb_geometry, h_at
from .equilibrium import green_at, solve_equilibrium
from .errors import NumericsError, VerificationError
from .intervals import cantor_exhaustion, parse_bands
from .minimax import MinimaxProblem, remez
from .verification import (
    dichotomy_report,
    random_interval_sets,
    verify_set,
)

__all__ = ["main", "console_entry"]


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _to_json(obj, indent: int = 0) -> str:
    """Tiny deterministic JSON writer: 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}"{k}": {_to_json(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, int):
        return str(obj)
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_degrees(spec: str) -> list[int]:
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3 or parts[2] not in ("even", "all"):
            raise ValueError(
                f"bad degree range {spec!r}; expected 'a:b:even' or 'a:b:all'"
            )
        a, b = int(parts[0]), int(parts[1])
        if b < a:
            raise ValueError("degree range end must not precede its start")
        step = 2 if parts[2] == "even" else 1
        start = a if (parts[2] == "all" or a % 2 == 0) else a + 1
        return list(range(start, b + 1, step))
    return [int(tok) for tok in spec.split(",") if tok.strip()]


@dataclass(frozen=True)
class RunConfig:
    """Echo of the parsed options that determine a run's output."""

    command: str
    set_spec: str | None = None
    x0: float | None = None
    alpha: float | None = None
    degrees: tuple[int, ...] | None = None
    quad_points: int = 256
    grid: int | None = None
    tol: float = 1e-12
    seed: int = 0
    fmt: str = "json"


def _add_common(p: argparse.ArgumentParser, *, need_set=True) -> None:
    if need_set:
        p.add_argument("--set", required=True, help='bands "a1,b1;a2,b2;..."')
    p.add_argument("--out", default=None, help="write output to this path")
    p.add_argument(
        "--format", choices=("json", "csv"), default=None, help="output format"
    )
    p.add_argument("--quad-points", type=int, default=256)


def _rate_json(report: RateReport) -> dict:
    return {
        "alpha": report.alpha,
        "x0": report.x0,
        "samples": [[n, v] for n, v in report.samples],
        "extrapolated_limit": report.extrapolated_limit,
        "limsup_estimate": report.limsup_estimate,
        "fit_residual": report.fit_residual,
    }


def _cmd_eq(args) -> int:
    E = parse_bands(args.set)
    eq = solve_equilibrium(E, args.quad_points)
    payload = {
        "bands": [[a, b] for a, b in E.bands],
        "capacity": eq.capacity,
        "gap_polynomial": list(eq.q_coeffs),
        "gap_zeros": list(eq.gap_zeros),
    }
    if (args.format or "json") == "csv":
        lines = ["field,value", f"capacity,{_fmt(eq.capacity)}"]
        for j, z in enumerate(eq.gap_zeros):
            lines.append(f"gap_zero_{j},{_fmt(z)}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(_to_json(payload), args.out)
    return 0


def _cmd_green(args) -> int:
    E = parse_bands(args.set)
    eq = solve_equilibrium(E, args.quad_points)
    points = []
    for spec in args.z:
        re, im = (float(tok) for tok in spec.split(","))
        points.append(complex(re, im))
    values = [green_at(eq, z) for z in points]
    if (args.format or "json") == "csv":
        lines = ["re,im,green"]
        for z, g in zip(points, values):
            lines.append(f"{_fmt(z.real)},{_fmt(z.imag)},{_fmt(g)}")
        _emit("\n".join(lines), args.out)
    else:
        payload = {
            "points": [
                {"z": [z.real, z.imag], "green": g}
                for z, g in zip(points, values)
            ]
        }
        _emit(_to_json(payload), args.out)
    return 0


def _cmd_comb(args) -> int:
    E = parse_bands(args.set)
    eq = solve_equilibrium(E, args.quad_points)
    geom = comb_geometry(eq, args.x0)
    payload = {"u": list(geom.u), "v": list(geom.v), "eta0": geom.eta0}
    _emit(_to_json(payload), args.out)
    return 0


def _cmd_remez(args) -> int:
    E = parse_bands(args.set)
    degrees = _parse_degrees(args.degrees) if args.degrees else [args.n]
    if degrees is None or not degrees:
        raise ValueError("give --n or --degrees")
    rows = []
    for n in degrees:
        result = remez(
            MinimaxProblem(set=E, x0=args.x0, alpha=args.alpha, degree=int(n)),
            grid_points_per_band=args.grid,
            tol=args.tol,
        )
        rows.append((int(n), result.error, result.iterations))
    if (args.format or "csv") == "csv":
        lines = ["n,error,iterations"]
        for n, err, its in rows:
            lines.append(f"{n},{_fmt(err)},{its}")
        _emit("\n".join(lines), args.out)
    else:
        payload = {
            "results": [
                {"n": n, "error": err, "iterations": its} for n, err, its in rows
            ]
        }
        _emit(_to_json(payload), args.out)
    return 0


def _cmd_rate(args) -> int:
    E = parse_bands(args.set)
    degrees = _parse_degrees(args.degrees) if args.degrees else list(DEFAULT_DEGREES)
    single = E.band_count == 1 and E.carrier == (-1.0, 1.0) and args.x0 == 0.0
    if single:
        report = sigma_alpha(args.alpha, degrees, grid_points_per_band=args.grid)
        payload = _rate_json(report)
    else:
        vt = vt_check(
            E, args.x0, args.alpha, degrees,
            quad_points=args.quad_points, grid_points_per_band=args.grid,
        )
        payload = {
            "alpha": vt.alpha,
            "x0": vt.x0,
            "samples": [[n, v] for n, v in vt.lhs_samples],
            "extrapolated_limit": vt.lhs_limit,
            "h": vt.h_value,
            "sigma": _rate_json(vt.sigma),
            "rhs": vt.rhs,
            "relative_gap": vt.relative_gap,
        }
    if (args.format or "json") == "csv":
        lines = ["n,n^alpha_En"]
        for n, v in payload["samples"]:
            lines.append(f"{n},{_fmt(v)}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(_to_json(payload), args.out)
    return 0


def _check_json(check) -> dict:
    return {"passed": check.passed, "margin": check.margin}


def _cmd_verify(args) -> int:
    if args.trials:
        sets = random_interval_sets(args.trials, seed=args.seed)
    else:
        if args.set is None or args.x0 is None:
            raise ValueError("give --set and --x0, or --trials")
        sets = [(parse_bands(args.set), args.x0)]
    reports = []
    failed = 0
    for E, x0 in sets:
        report = verify_set(
            E, x0, sample_count=args.samples, quad_points=args.quad_points
        )
        if not report.all_passed:
            failed += 1
        reports.append(report)
    payload = {
        "trials": len(reports),
        "failures": failed,
        "reports": [
            {
                "bands": [[a, b] for a, b in r.set.bands],
                "x0": r.x0,
                "c": r.ledger.c,
                "c1": r.ledger.c1,
                "w0_im": r.ledger.w0_im,
                "sandwich_margin": r.ledger.sandwich_margin,
                "checks": {ch.name: _check_json(ch) for ch in r.checks},
                "all_passed": r.all_passed,
            }
            for r in reports
        ],
    }
    _emit(_to_json(payload), args.out)
    if failed:
        raise VerificationError(f"{failed} of {len(reports)} sets failed a bound")
    return 0


def _cmd_dichotomy(args) -> int:
    exh = cantor_exhaustion(
        args.ratio, args.levels, carrier=tuple(float(t) for t in args.carrier.split(","))
    )
    degrees = _parse_degrees(args.degrees) if args.degrees else [20, 28, 40, 56]
    floors = [float(tok) for tok in args.y_floors.split(",")]
    report = dichotomy_report(
        exh, args.x0, args.alpha, degrees, floors,
        quad_points=args.quad_points, grid_points_per_band=args.grid,
    )
    payload = {
        "x0": report.x0,
        "alpha": report.alpha,
        "levels": [
            {
                "level": row.level,
                "bands": row.band_count,
                "rates": [[n, v] for n, v in row.rate_samples],
                "sup_estimates": [[y, s] for y, s in row.sup_estimates],
            }
            for row in report.rows
        ],
    }
    _emit(_to_json(payload), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="potapprox",
        description="potential theory and minimax approximation on interval unions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eq", help="equilibrium data of a set")
    _add_common(p)
    p.set_defaults(func=_cmd_eq)

    p = sub.add_parser("green", help="Green's function values")
    _add_common(p)
    p.add_argument("--z", action="append", required=True, help='point "re,im"')
    p.set_defaults(func=_cmd_green)

    p = sub.add_parser("comb", help="comb geometry")
    _add_common(p)
    p.add_argument("--x0", type=float, required=True)
    p.set_defaults(func=_cmd_comb)

    p = sub.add_parser("remez", help="minimax errors")
    _add_common(p)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--degrees", default=None, help='"a:b:even|all" or list')
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=_cmd_remez)

    p = sub.add_parser("rate", help="scaled-error ladder and limit")
    _add_common(p)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--degrees", default=None)
    p.add_argument("--grid", type=int, default=None)
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("verify", help="bound verification suite")
    _add_common(p, need_set=False)
    p.add_argument("--set", default=None)
    p.add_argument("--x0", type=float, default=None)
    p.add_argument("--trials", type=int, default=0, help="randomized sets")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=60)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("dichotomy", help="rate/Lipschitz exhaustion table")
    _add_common(p, need_set=False)
    p.add_argument("--ratio", type=float, default=1.0 / 3.0)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--carrier", default="-1,1")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--degrees", default=None)
    p.add_argument("--y-floors", default="1e-4,1e-6,1e-8")
    p.add_argument("--grid", type=int, default=None)
    p.set_defaults(func=_cmd_dichotomy)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 4
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def console_entry() -> None:
    sys.exit(main())
