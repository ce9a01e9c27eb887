"""Command-line entry point: ``paramlp {solve,sweep,phi,psi,gen,bench}``.

Exit codes: 0 success, 1 usage or internal error, 2 infeasible, 3 unbounded,
4 solved but the (d, c) >= 0 assumption was violated.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import InfeasibleError, InconsistentRowsError, ParamLPError
from .harness import io
from .harness.bench import run_bench
from .harness.generators import gen_klee_minty, gen_random_bounded
from .parametric import DUAL, PRIMAL, phi, psi, sweep
from .pivotpath import parametric_path_solve
from .scalar import EXACT, FLOAT, format_scalar, parse_scalar
from .simplex import BLAND, DANTZIG, INFEASIBLE, PARAMETRIC, UNBOUNDED, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_UNBOUNDED = 3
EXIT_ASSUMPTION = 4


def _emit(data) -> None:
    print(json.dumps(data, indent=2))


def _load_pair(args):
    lp = io.load_lp(args.file, args.arith)
    if args.pair:
        return io.load_pair(args.pair, lp=lp)
    return io.pair_from_lp(lp)


def cmd_solve(args) -> int:
    lp = io.load_lp(args.file, args.arith)
    out = {"instance": lp.name, "rule": args.rule}
    code = EXIT_OK
    if args.rule == PARAMETRIC:
        sol, report = parametric_path_solve(lp)
        out["report"] = report.to_json()
        if not report.assumption_clean and sol.status not in (INFEASIBLE, UNBOUNDED):
            code = EXIT_ASSUMPTION
    else:
        sol = solve(lp, args.rule)
    out["status"] = sol.status
    if sol.x is not None:
        out["x"] = [format_scalar(v) for v in sol.x]
    if sol.objective is not None:
        out["objective"] = format_scalar(sol.objective)
    if sol.ray is not None:
        out["ray"] = [format_scalar(v) for v in sol.ray]
    out["pivots"] = sol.trace.pivots
    if args.trace:
        io.save_trace(sol.trace, args.trace)
    _emit(out)
    if sol.status == INFEASIBLE:
        return EXIT_INFEASIBLE
    if sol.status == UNBOUNDED:
        return EXIT_UNBOUNDED
    return code


def cmd_sweep(args) -> int:
    pair = _load_pair(args)
    dec = sweep(pair, args.side)
    if args.out:
        io.save_decomposition(dec, args.out)
    _emit(dec.to_json())
    return EXIT_OK if pair.assumption_clean else EXIT_ASSUMPTION


def _map_command(fn, key):
    def run(args) -> int:
        pair = _load_pair(args)
        value = parse_scalar(getattr(args, key), args.arith)
        image = fn(pair, value)
        _emit({key: format_scalar(value), "image": image.to_json(), "text": str(image)})
        return EXIT_OK if pair.assumption_clean else EXIT_ASSUMPTION
    return run


def cmd_gen(args) -> int:
    if args.kind == "klee-minty":
        if args.D is None:
            raise SystemExit("gen --kind klee-minty needs --D")
        lp = gen_klee_minty(args.D)
    else:
        if None in (args.m, args.n, args.seed):
            raise SystemExit("gen --kind random needs --m, --n and --seed")
        lp = gen_random_bounded(args.m, args.n, args.seed)
    io.save_lp(lp, args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    report = run_bench(args.suite, jobs=args.jobs, trace_dump=args.trace_dump)
    io.write_json(report.to_json(), args.report)
    agg = report.aggregate()
    print(f"{agg['runs']} runs, {agg['total_pivots']} pivots, all verified: {agg['all_verified']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paramlp", description="Exact simplex and rank-one parametric LP tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_arith(p):
        p.add_argument("--arith", choices=(EXACT, FLOAT), default=EXACT)

    p = sub.add_parser("solve", help="solve a standard-form LP")
    p.add_argument("file")
    p.add_argument("--rule", choices=(BLAND, DANTZIG, PARAMETRIC), default=BLAND)
    add_arith(p)
    p.add_argument("--trace", help="write the pivot trace here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="invariancy decomposition of one side of a pair")
    p.add_argument("file")
    p.add_argument("--side", choices=(PRIMAL, DUAL), default=PRIMAL)
    p.add_argument("--pair", help="file with 'd' and 'B' (otherwise read from FILE)")
    p.add_argument("--out", help="write the decomposition here")
    add_arith(p)
    p.set_defaults(func=cmd_sweep)

    for name, fn, key in (("phi", phi, "u"), ("psi", psi, "v")):
        p = sub.add_parser(name, help=f"image of a single {key}")
        p.add_argument("file")
        p.add_argument(f"--{key}", required=True)
        p.add_argument("--pair", help="file with 'd' and 'B' (otherwise read from FILE)")
        add_arith(p)
        p.set_defaults(func=_map_command(fn, key))

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("--kind", choices=("klee-minty", "random"), required=True)
    p.add_argument("--D", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trace-dump", help="where to write the trace of a failing run")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InfeasibleError, InconsistentRowsError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParamLPError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
