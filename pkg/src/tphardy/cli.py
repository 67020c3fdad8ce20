"""Command-line front end.

Exit status: 0 on success, 1 when ``--strict`` is set and the command's
headline verdict fails (or when a ``verify-paper`` check fails), 2 on input
errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report as rp
from .analysis.criteria import compact_sufficient_check, invertibility_check, tp0_boundedness_checks
from .analysis.operator import check_operator_p
from .analysis.trends import TrendThresholds
from .functions import INF, parse_p
from .io import InputError, check_depth, load_function, load_map_spec
from .reference_suite import run as run_suite
from .symbols import SymbolError
from .tree import TreeError

COMMANDS = ("analyze", "norm", "isometry", "invertibility", "compactness", "tp0", "verify-paper")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="branching parameter (the tree is (q+1)-homogeneous)")
    common.add_argument("--p", default="2", help="exponent: a decimal >= 1 or 'inf' (default 2)")
    common.add_argument("--depth", type=int, default=6, help="truncation depth (default 6)")
    common.add_argument("--map", dest="map_path", metavar="FILE", help="map-spec JSON file")
    common.add_argument("--fn", dest="fn_path", metavar="FILE", help="function literal to compose with the map")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=200, help="random trials for the oracle and spot checks")
    common.add_argument("--strict", action="store_true", help="exit 1 when the headline verdict fails")
    common.add_argument("--out", metavar="FILE", help="write the JSON report here instead of stdout")
    common.add_argument("--plateau-window", type=float, default=0.5)
    common.add_argument("--decay-ratio", type=float, default=0.1)
    parser = argparse.ArgumentParser(prog="tphardy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _load(args):
    if args.depth < 1:
        raise InputError(f"depth must be >= 1, got {args.depth}")
    if args.q is not None and args.q < 1:
        raise InputError(f"q must be >= 1, got {args.q}")
    if args.trials < 0:
        raise InputError("trials must be >= 0")
    p = parse_p(args.p)
    if p != INF:
        check_operator_p(p)
    th = TrendThresholds(args.plateau_window, args.decay_ratio)
    if args.command == "verify-paper":
        if args.q is None:
            raise InputError("verify-paper needs --q")
        return None, p, th, None
    if not args.map_path:
        raise InputError(f"{args.command} needs --map FILE")
    phi = load_map_spec(args.map_path, args.q)
    check_depth(phi, args.depth)
    f = load_function(args.fn_path, phi.q) if args.fn_path else None
    return phi, p, th, f


def execute(args) -> tuple[dict, bool]:
    """The report and whether its headline verdict failed."""
    phi, p, th, f = _load(args)
    depth = args.depth
    if args.command == "verify-paper":
        checks = run_suite(args.q, depth, args.seed, args.trials)
        passed = all(c.passed for c in checks)
        rep = {
            "config": {"q": args.q, "depth": depth, "seed": args.seed, "trials": args.trials},
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
            "passed": passed,
        }
        return rep, not passed

    cfg = rp.config_section(phi, p, depth, args.seed, args.trials, th)
    if args.command == "analyze":
        rep = rp.build_report(phi, p, depth, seed=args.seed, trials=args.trials, thresholds=th, f=f)
        return rep, rp.has_failure(rep["verdicts"]["bounded"])

    if args.command == "norm":
        rep = {"config": cfg}
        if p != INF:
            rep["alpha"], seq = rp.alpha_section(phi, depth, th)
        else:
            seq = None
        rep["norm"] = rp.norm_section(phi, p, depth, th, args.seed, args.trials)
        if f is not None:
            rep["function"] = rp.function_section(phi, f, p, depth)
        rep["truncation"] = rp.truncation_section(phi, depth, seq)
        failed = seq is not None and seq.trend == "increasing-unbounded-suspected"
        return rep, failed

    if args.command == "isometry":
        section = rp.isometry_section(phi, p, depth)
        return {"config": cfg, "isometry": section, "truncation": rp.truncation_section(phi, depth)}, \
            section["overall"] == "violated"

    if args.command == "invertibility":
        v = rp.verdict_dict(invertibility_check(phi, p, depth, th))
        return {"config": cfg, "invertible": v, "truncation": rp.truncation_section(phi, depth)}, rp.has_failure(v)

    if args.command == "compactness":
        checks = {k: rp.verdict_dict(v) for k, v in compact_sufficient_check(phi, depth, th).items()}
        key = "t_inf" if p == INF else "necessary"
        return {"config": cfg, "compactness": checks, "truncation": rp.truncation_section(phi, depth)}, \
            rp.has_failure(checks[key])

    checks = {k: rp.verdict_dict(v) for k, v in tp0_boundedness_checks(phi, p, depth, thresholds=th).items()}
    return {"config": cfg, "tp0": checks, "truncation": rp.truncation_section(phi, depth)}, \
        rp.has_failure(checks["min_level"])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep, failed = execute(args)
    except (InputError, SymbolError, TreeError, ValueError) as exc:
        print(f"tphardy: error: {exc}", file=sys.stderr)
        return 2
    text = rp.dumps(rep)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"tphardy: error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    if args.command == "verify-paper":
        return 1 if failed else 0
    return 1 if args.strict and failed else 0


if __name__ == "__main__":
    sys.exit(main())
