"""Command-line entry point: ``domivar <command> [options] INSTANCE``.

Exit codes: 0 success, 1 invalid instance or failed validation,
2 solver assumption failure, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .analysis import classify, solution_sets, theta_sets, verify_relationship_propositions
from .behavioral import find_trap
from .evp import AssumptionError, Variant, brute_force_fixed_points, solve, validate_assumptions
from .geometry import generators_of
from .io import (
    InstanceError,
    dumps_report,
    load_instance,
    make_report,
    report_to_csv,
)
from .quasispace import validate_axioms
from .scalarization import gerstewitz, gerstewitz_oracle

EXIT_OK, EXIT_INVALID, EXIT_ASSUMPTION, EXIT_INTERNAL = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="domivar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"domivar {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-identity)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="axiom and assumption diagnostics")
    s.add_argument("instance")
    s.add_argument("--variant", choices=["efficient", "nondominated", "both"], default="both")

    s = sub.add_parser("classify", parents=[common], help="solution flags for every point")
    s.add_argument("instance")

    s = sub.add_parser("solve", parents=[common], help="run the Picard iteration")
    s.add_argument("instance")
    s.add_argument("--variant", choices=["efficient", "nondominated"], default="efficient")
    s.add_argument("--oracle", action="store_true", help="also list all fixed points by brute force")

    s = sub.add_parser("find-trap", parents=[common], help="find and certify a trap")
    s.add_argument("instance")
    s.add_argument("--kind", choices=["ex-ante", "ex-post"], default="ex-ante")

    s = sub.add_parser("scalarize", parents=[common], help="scalarization values with an oracle check")
    s.add_argument("instance")
    s.add_argument("--point", action="append", default=[],
                   help="comma-separated payoff vector (repeatable); default: psi at every point")

    s = sub.add_parser("report", parents=[common], help="convert a saved report")
    s.add_argument("report")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    return p


def _cmd_validate(inst, args):
    variants = ["efficient", "nondominated"] if args.variant == "both" else [args.variant]
    axioms = validate_axioms(inst.quasimetric, inst.ground)
    result = {"axioms": axioms, "assumptions": {}, "notes": inst.notes}
    for v in variants:
        result["assumptions"][v] = validate_assumptions(inst, v)
    if inst.ground.dim == 1:
        for v in variants:
            w0 = result["assumptions"][v]["E1"]["W_x0"]
            xs = [float(inst.ground.coords[inst.index(s)][0]) for s in w0]
            result["assumptions"][v]["E1"]["W_x0_range"] = [min(xs), max(xs)]
    return result, EXIT_OK if axioms["ok"] else EXIT_INVALID


def _cmd_classify(inst, args):
    rows = classify(inst)
    theta_i, theta_u = theta_sets(inst)
    result = {
        "rows": [r.to_json() for r in rows],
        "sets": solution_sets(rows),
        "propositions": verify_relationship_propositions(inst, rows),
        "theta_u_members": len(theta_u),
    }
    if theta_i is not None:
        result["theta_i"] = {"A": theta_i.A, "b": theta_i.b}
        if theta_i.dim == 2 and theta_i.is_cone:
            result["theta_i"]["generators"] = generators_of(theta_i)
    return result, EXIT_OK


def _cmd_solve(inst, args):
    res = solve(inst, args.variant)
    out = res.to_json()
    if args.oracle:
        out["fixed_points"] = brute_force_fixed_points(inst, args.variant)
    return out, EXIT_OK


def _cmd_trap(inst, args):
    return find_trap(inst, args.kind).to_json(), EXIT_OK


def _cmd_scalarize(inst, args):
    spec = inst.scalarization
    F = inst.payoffs()
    pts = []
    if args.point:
        for s in args.point:
            y = np.array([float(v) for v in s.split(",")])
            if y.size != inst.dim:
                raise InstanceError([f"--point {s!r}: expected {inst.dim} coordinates"])
            pts.append((s, y))
    else:
        pts = [(lab, F[i] - F[inst.x0_index]) for i, lab in enumerate(inst.labels)]
    rows = []
    for name, y in pts:
        val = gerstewitz(spec, y)
        ora, exhausted = gerstewitz_oracle(spec, y)
        agree = (val == ora) if not (np.isfinite(val) and np.isfinite(ora)) else abs(val - ora) <= 1e-6
        rows.append({"point": name, "y": y, "phi": val, "oracle": ora,
                     "oracle_exhausted": exhausted, "agree": bool(agree)})
    return {"theta": {"A": spec.theta.A, "b": spec.theta.b}, "k": spec.k, "points": rows}, EXIT_OK


COMMANDS = {
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "solve": _cmd_solve,
    "find-trap": _cmd_trap,
    "scalarize": _cmd_scalarize,
}


def _emit(text: str, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_cli(argv=None) -> int:
    args = _parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "report":
            try:
                with open(args.report) as fh:
                    rep = json.load(fh)
                text = report_to_csv(rep) if args.format == "csv" else dumps_report(rep)
            except ValueError as exc:
                print(f"domivar: cannot convert {args.report}: {exc}", file=sys.stderr)
                return EXIT_INVALID
            _emit(text, args.output)
            return EXIT_OK
        inst = load_instance(args.instance)
        extra = {}
        if getattr(args, "variant", None) and args.command == "solve":
            extra["variant"] = Variant.parse(args.variant).value
        result, code = COMMANDS[args.command](inst, args)
        if args.timing:
            extra["timing_seconds"] = round(time.perf_counter() - t0, 6)
        _emit(dumps_report(make_report(args.command, inst, result, extra)), args.output)
        return code
    except InstanceError as exc:
        _emit(dumps_report({"schema": 1, "command": args.command, "error": "invalid instance",
                            "details": exc.errors}), args.output)
        print(f"domivar: invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"domivar: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AssumptionError as exc:
        _emit(dumps_report({"schema": 1, "command": args.command, "error": "assumption failure",
                            "clause": exc.clause, "details": str(exc)}), args.output)
        print(f"domivar: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except Exception as exc:  # noqa: BLE001
        print(f"domivar: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main(argv=None):
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
