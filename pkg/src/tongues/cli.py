"""Command-line interface: tongue sweeps, pinch reports, certificates,
conjugacy dumps, perturbation demos, and SVG/PNG diagram rendering."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import gcd

from .numeric import RationalInterval, rat, rat_str
from .forcing import ReducedPLForcing, SineForcing, parse_forcing
from .pl_engine import pl_from_family
from .circle_map import UnresolvedError
from .tongue_scan import DEFAULT_TOL, scan_tongues, write_csv
from .render import render_png, render_svg
from .pinch import (NotPinchError, build_conjugacy, certify_pinch,
                    enumerate_pinches, invariant_density, pinch_count,
                    verify_pinch)
from .perturb import BudgetExhaustedError, enumerate_plausible, separate_roots

EXIT_PARSE = 2
EXIT_UNRESOLVED = 3


def _error(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def _parse_pq(text: str) -> tuple[int, int]:
    p_str, q_str = text.split("/")
    p, q = int(p_str), int(q_str)
    if q < 1 or gcd(p, q) != 1:
        raise ValueError(f"p/q must be reduced with q >= 1: {text}")
    return p, q


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tongues",
        description="Arnol'd tongue boundaries and pinch points of "
                    "standard-like circle map families.")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="sweep tongue boundaries over a b grid")
    scan.add_argument("--forcing", required=True)
    scan.add_argument("--qmax", type=int, default=4)
    scan.add_argument("--b-steps", type=int, default=200)
    scan.add_argument("--tol", default=None)
    scan.add_argument("--csv")
    scan.add_argument("--svg")
    scan.add_argument("--png")

    pinch = sub.add_parser("pinch", help="JSON pinch report for a k=2 forcing")
    pinch.add_argument("--forcing", required=True)
    pinch.add_argument("--qmax", type=int, default=4)
    pinch.add_argument("--out")

    verify = sub.add_parser("verify", help="certify a pinch at given b, omega")
    verify.add_argument("--forcing", required=True)
    verify.add_argument("--b", required=True)
    verify.add_argument("--omega", required=True)
    verify.add_argument("--pq", required=True)
    verify.add_argument("--out")

    conj = sub.add_parser("conjugacy",
                          help="PL conjugacy and step density of an exact pinch")
    conj.add_argument("--forcing", required=True)
    conj.add_argument("--b", required=True)
    conj.add_argument("--omega", required=True)
    conj.add_argument("--pq", required=True)
    conj.add_argument("--out")

    demo = sub.add_parser("perturb-demo",
                          help="plausible roots before/after separation")
    demo.add_argument("--forcing", required=True)
    demo.add_argument("--qmax", type=int, default=3)
    demo.add_argument("--tol", default="1/1000")
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--out")
    return parser


def _write_or_print(payload: dict, out_path) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_scan(args) -> int:
    forcing = parse_forcing(args.forcing)
    tol = rat(args.tol) if args.tol else DEFAULT_TOL
    if args.b_steps < 1:
        raise ValueError("--b-steps must be positive")
    b_grid = [Fraction(i, args.b_steps) for i in range(1, args.b_steps + 1)]
    records = scan_tongues(forcing, args.qmax, b_grid, tol)
    pinches = []
    if isinstance(forcing, ReducedPLForcing) and forcing.k == 2:
        for pt in enumerate_pinches(forcing.w[1], args.qmax):
            b = pt.b if isinstance(pt.b, Fraction) else pt.b.mid
            om = pt.omega if isinstance(pt.omega, Fraction) else pt.omega.mid
            pinches.append((pt.p, pt.q, float(b), float(om)))
    if args.csv:
        write_csv(args.csv, records)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(records, pinches))
    if args.png:
        render_png(args.png, records, pinches)
    if not (args.csv or args.svg or args.png):
        write_csv("/dev/stdout", records)
    return 0


def _cmd_pinch(args) -> int:
    forcing = parse_forcing(args.forcing)
    if not isinstance(forcing, ReducedPLForcing) or forcing.k != 2:
        raise ValueError("pinch enumeration requires a two-weight PL forcing")
    points = enumerate_pinches(forcing.w[1], args.qmax)
    report = {
        "forcing": args.forcing,
        "q_max": args.qmax,
        "pinch_counts": {str(q): pinch_count(q, forcing.w[1])
                         for q in range(2, args.qmax + 1)},
        "pinches": [pt.to_json() for pt in points],
    }
    _write_or_print(report, args.out)
    return 0


def _cmd_verify(args) -> int:
    forcing = parse_forcing(args.forcing)
    if not isinstance(forcing, ReducedPLForcing):
        raise ValueError("verification requires a PL forcing")
    p, q = _parse_pq(args.pq)
    try:
        cert = verify_pinch(rat(args.b), rat(args.omega), forcing, p, q)
        payload = {"pinch": True, "certificate": cert.label()}
    except NotPinchError as exc:
        payload = {"pinch": False, "reason": str(exc),
                   "witness": rat_str(exc.witness) if exc.witness is not None
                   else None}
    _write_or_print(payload, args.out)
    return 0


def _cmd_conjugacy(args) -> int:
    forcing = parse_forcing(args.forcing)
    if not isinstance(forcing, ReducedPLForcing):
        raise ValueError("conjugacy requires a PL forcing")
    p, q = _parse_pq(args.pq)
    g = pl_from_family(rat(args.b), rat(args.omega), forcing)
    h = build_conjugacy(g, p, q)
    eta = invariant_density(g, h)
    payload = {
        "h": h.to_json(),
        "density": {
            "breakpoints": [rat_str(x) for x in eta.breakpoints],
            "values": [rat_str(v) for v in eta.values],
        },
    }
    _write_or_print(payload, args.out)
    return 0


def _cmd_perturb_demo(args) -> int:
    forcing = parse_forcing(args.forcing)
    if not isinstance(forcing, ReducedPLForcing) or forcing.k < 3:
        raise ValueError("perturb-demo requires a PL forcing with k >= 3")
    q, n = args.qmax, 2

    def report(w):
        return [{"indices": [[i, e] for i, e in ps.J.pairs],
                 "root": list(ps.root.to_strs())}
                for ps in enumerate_plausible(w, q, n)]

    before = report(forcing.w)
    w2, ell2 = separate_roots(forcing.w, forcing.ell, q, n,
                              rat(args.tol), seed=args.seed)
    payload = {
        "before": {"w": [rat_str(x) for x in forcing.w], "sets": before},
        "after": {"w": [rat_str(x) for x in w2],
                  "l": [rat_str(x) for x in ell2],
                  "sets": report(w2)},
        "seed": args.seed,
    }
    _write_or_print(payload, args.out)
    return 0


_COMMANDS = {
    "scan": _cmd_scan,
    "pinch": _cmd_pinch,
    "verify": _cmd_verify,
    "conjugacy": _cmd_conjugacy,
    "perturb-demo": _cmd_perturb_demo,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, ZeroDivisionError) as exc:
        return _error(EXIT_PARSE, "parse", str(exc))
    except (UnresolvedError, BudgetExhaustedError) as exc:
        return _error(EXIT_UNRESOLVED, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
