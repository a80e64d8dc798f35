"""Command line entry point: ``toystab run|demo|count|oracle-check``."""

from __future__ import annotations

import argparse
import sys

from .circuit import ParseError, RunError, parse, run
from .demos import DEMOS, graph_demo

EXIT_OK, EXIT_PARSE, EXIT_RUNTIME, EXIT_ASSERT = 0, 1, 2, 3

_KINDS = {"states": "all_states", "transforms": "transformations"}


def _read(path: str) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _load(path: str):
    try:
        return parse(_read(path))
    except ParseError as e:
        print(f"{path}: {e}", file=sys.stderr)
        return None


def cmd_run(args) -> int:
    program = _load(args.file)
    if program is None:
        return EXIT_PARSE
    try:
        trace = run(program, seed=args.seed, trace=args.trace)
    except RunError as e:
        print(f"{args.file}: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.trace:
        for i, rec in enumerate(trace.records, start=1):
            gens = ", ".join(rec.generators) if rec.generators is not None else ""
            print(f"# {i}: <{gens}>")
    for line in trace.output:
        print(line)
    return EXIT_OK


def cmd_demo(args) -> int:
    try:
        if args.name == "graph":
            report = graph_demo(args.edges, args.measure_z, args.seed)
        else:
            report = DEMOS[args.name]()
    except (ValueError, RuntimeError) as e:
        print(f"demo {args.name}: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    for line in report.lines:
        print(line)
    return EXIT_OK if report.ok else EXIT_ASSERT


def cmd_count(args) -> int:
    from .oracle import count

    kind = _KINDS[args.kind]
    if args.kind == "states" and args.pure:
        kind = "pure_states"
    try:
        report = count(kind, args.n, args.method)
    except ValueError as e:
        print(f"count: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    print(report.line())
    return EXIT_OK if report.ok else EXIT_ASSERT


def cmd_oracle(args) -> int:
    from .oracle import oracle_check_circuit

    program = _load(args.file)
    if program is None:
        return EXIT_PARSE
    try:
        report = oracle_check_circuit(program, args.trials, args.seed)
    except ValueError as e:
        print(f"{args.file}: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_ASSERT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toystab", description="Stabilizer notation for the toy theory.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute a circuit file")
    r.add_argument("file")
    r.add_argument("--seed", type=int, default=None, help="required when a measurement is random")
    r.add_argument("--trace", action="store_true", help="print canonical generators after each statement")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("demo", help="run a worked example")
    d.add_argument("name", choices=sorted(DEMOS))
    d.add_argument("--edges", default="1-2,2-3", help="graph demo: 1-based edge list")
    d.add_argument("--measure-z", type=int, default=2, help="graph demo: 1-based vertex")
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_demo)

    c = sub.add_parser("count", help="compare counting formulas with enumeration")
    c.add_argument("kind", choices=sorted(_KINDS))
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--pure", action="store_true", help="states: pure states only")
    c.add_argument("--method", choices=("formula", "enumerate", "both"), default="both")
    c.set_defaults(func=cmd_count)

    o = sub.add_parser("oracle-check", help="compare a toy circuit with brute-force ontic simulation")
    o.add_argument("file")
    o.add_argument("--trials", type=int, default=1000)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
