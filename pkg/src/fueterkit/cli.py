"""Command-line interface.

Subcommands::

    fueterkit spectrum --op T.json
    fueterkit kernel --kind P2L --s 2 --q e1
    fueterkit calc --which P2 --f pow2 --op T.json [--radius R --center c --annulus r_in,r_out --J x,y,z --nodes N]
    fueterkit verify [--suite all] [--seed 0]
    fueterkit series-compare --s 2 --q 0.5+0.5i [--tol 1e-12] [--side left]

Exit codes: 0 success, 2 invalid input, 3 numerical failure or failed checks.
Operator files hold ``{"dim": d, "T0": [[...]], "T1": ..., "T2": ..., "T3": ...}``.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import kern, opcalc, sfun
from .contour import SliceContour
from .errors import NumericalError, ValidationError
from .hcore import Quaternion, imaginary_unit, parse_quaternion
from .verify import SUITES, relative_error, run_suite

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


class UsageError(ValidationError):
    pass


def _quaternion_json(q: Quaternion) -> dict:
    return {"w": float(q.w), "x": float(q.x), "y": float(q.y), "z": float(q.z)}


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_operator(path: str) -> opcalc.CommutingOperator:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read operator file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"operator file is not valid JSON: {exc}") from exc
    try:
        return opcalc.CommutingOperator.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"operator file needs keys dim, T0..T3: {exc}") from exc


def _parse_q(text: str) -> Quaternion:
    try:
        return parse_quaternion(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _floats(text: str, count: int, flag: str) -> List[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != count:
        raise UsageError(f"{flag} expects {count} comma-separated numbers, got {text!r}")
    return vals


def _contour(args, T: opcalc.CommutingOperator) -> SliceContour:
    J = imaginary_unit(*_floats(args.J, 3, "--J")) if args.J else None
    if args.annulus:
        r_in, r_out = _floats(args.annulus, 2, "--annulus")
        contour = SliceContour.annulus(r_in, r_out, args.center, nodes=args.nodes)
    elif args.radius is not None:
        contour = SliceContour.disk(args.radius, args.center, nodes=args.nodes)
    else:
        base = opcalc.default_contour(T)
        contour = SliceContour(base.J, base.circles, args.nodes)
    return contour.with_J(J) if J is not None else contour


def cmd_spectrum(args) -> int:
    T = _load_operator(args.op)
    sys.stdout.write(opcalc.s_spectrum(T).to_csv())
    return EXIT_OK


def cmd_kernel(args) -> int:
    value = kern.kernel_eval(args.kind, _parse_q(args.s), _parse_q(args.q))
    _emit(_quaternion_json(value))
    return EXIT_OK


def cmd_calc(args) -> int:
    T = _load_operator(args.op)
    try:
        f = sfun.builtin(args.f)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    M = opcalc.calculus_apply(args.which, f, T, _contour(args, T))
    _emit(M.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed)
    _emit(report)
    return EXIT_OK if all(r["pass"] for r in report) else EXIT_NUMERICAL


def cmd_series_compare(args) -> int:
    s, q = _parse_q(args.s), _parse_q(args.q)
    kind = "P2L" if args.side == "left" else "P2R"
    closed = kern.kernel_eval(kind, s, q)
    series = kern.dbar_kernel_series(args.side, s, q, tol=args.tol)
    appell = kern.appell_kernel_series(args.side, s, q, tol=args.tol)
    _emit({
        "kernel": kind,
        "closed_form": _quaternion_json(closed),
        "series": _quaternion_json(series),
        "appell_series": _quaternion_json(appell),
        "deviation": abs(series - closed),
        "appell_deviation": abs(appell - closed),
        "relative_deviation": relative_error(series, closed),
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fueterkit",
                                     description="Slice and polyanalytic functional calculus tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="S-spectrum of a commuting quadruple as CSV")
    p.add_argument("--op", required=True, help="operator JSON file")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("kernel", help="evaluate a kernel at (s, q)")
    p.add_argument("--kind", required=True, choices=kern.KERNEL_KINDS)
    p.add_argument("--s", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("calc", help="apply the S-, F- or P2-calculus")
    p.add_argument("--which", required=True, choices=("S", "F", "P2"))
    p.add_argument("--f", required=True, help="powN, exp, one or rational:n0,n1/d0,d1")
    p.add_argument("--op", required=True)
    p.add_argument("--radius", type=float)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--annulus", help="r_in,r_out")
    p.add_argument("--J", help="imaginary unit direction x,y,z")
    p.add_argument("--nodes", type=int)
    p.set_defaults(func=cmd_calc)

    p = sub.add_parser("verify", help="run named checks and report JSON")
    p.add_argument("--suite", default="all", choices=("all",) + SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("series-compare", help="closed-form versus series kernel")
    p.add_argument("--s", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--side", default="left", choices=("left", "right"))
    p.set_defaults(func=cmd_series_compare)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
    except (NumericalError, ZeroDivisionError) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL
    except ValueError as exc:
        sys.stderr.write(f"ValueError: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
