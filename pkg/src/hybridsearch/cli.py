"""Command-line front end: ``solve``, ``bench``, ``gen`` and ``oracle``.

Exit codes: 0 solved, 1 usage or input error, 2 budget exceeded, 3 unsolvable.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench
from .domains import DOMAINS, InstanceSyntaxError
from .heuristics import PDB_CACHE_ENV
from .oracle import OracleLimitError, bfs_solve

USAGE_ERROR = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _common(p, with_algorithm=True):
    p.add_argument("--domain", choices=DOMAINS)
    p.add_argument("--heuristic", help="e.g. manhattan, pdb:0,1,2,3 or 'manhattan;pdb:0,1,2,3' (max)")
    if with_algorithm:
        p.add_argument("--algorithm", default="astar",
                       help="astar, bfida, hybrid-inf, hybrid-k (k from --max-calls) or hybrid-<k>")
        p.add_argument("--threshold", type=int, help="A*-phase stored-node cap for the hybrid "
                       f"(~{bench.BYTES_PER_STORED_NODE} bytes per node)")
        p.add_argument("--max-calls", type=int, help="BFHS calls per iteration for hybrid-k")
        p.add_argument("--node-budget", type=int)
        p.add_argument("--time-budget", type=float)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-timing", action="store_true",
                   help="omit wall times so output is byte-identical across runs")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hybridsearch", description=__doc__.splitlines()[0],
                     epilog=f"PDB tables are cached in ${PDB_CACHE_ENV} when set.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--instance", required=True,
                   help="instance file, builtin:figure1, or random:<domain>:<knobs> (uses --seed)")
    p.add_argument("--path", action="store_true", help="also print the solution path")
    p.add_argument("--calls", action="store_true", help="also print the hybrid's BFHS call log")
    _common(p)

    p = sub.add_parser("bench", help="run a suite file")
    p.add_argument("suite", type=Path)
    p.add_argument("--jobs", type=int, default=1)
    _common(p, with_algorithm=False)

    p = sub.add_parser("gen", help="generate seeded instances")
    p.add_argument("--domain", choices=("tile", "hanoi4", "pancake"), required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--with-oracle", action="store_true", help="write BFS distances to oracle.csv")
    p.add_argument("knobs", nargs="*", help="tile: 4x4 40; hanoi4: 3-6 [random]; pancake: 8")

    p = sub.add_parser("oracle", help="uninformed-BFS reference distances")
    p.add_argument("instances", nargs="+")
    p.add_argument("--domain", choices=DOMAINS)
    p.add_argument("--max-states", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    return parser


def _solve(args) -> int:
    req = bench.RunRequest(args.instance, args.algorithm, args.domain, args.heuristic, args.threshold,
                           args.max_calls, args.node_budget, args.time_budget, args.format, args.seed)
    row, _ = bench.solve(req, keep_path=args.path)
    timing = not args.no_timing
    sys.stdout.write(bench.format_rows([row], args.format, timing))
    if args.format != "json":
        if args.calls:
            for c in row.call_log:
                nf = "inf" if c["next_f"] is None else c["next_f"]
                verdict = "solved" if c["solved"] else f"next_f={nf}"
                print(f"call bound={c['bound']} depths={c['depths']} seeds={c['seeds']} {verdict}")
        if args.path and row.path:
            for i, s in enumerate(row.path):
                print(f"{i:4d}  {s}")
    return bench.EXIT_CODES[row.status]


def _bench(args) -> int:
    entries = bench.parse_suite(args.suite.read_text(), args.suite.parent)
    for e in entries:
        if args.heuristic and "heuristic" not in e.options:
            e.options["heuristic"] = args.heuristic
        if args.domain and "domain" not in e.options:
            e.options["domain"] = args.domain
    rows = bench.run_suite(entries, args.jobs)
    summary = bench.summarize(rows)
    timing = not args.no_timing
    if not timing:
        summary = {"instances": summary["instances"],
                   "wins": {a: {"peak_stored": w["peak_stored"]} for a, w in summary["wins"].items()}}
    sys.stdout.write(bench.format_rows(rows, args.format, timing, summary))
    return 0


def _gen(args) -> int:
    insts = bench.generate_instances(args.domain, args.count, args.seed, args.knobs)
    paths = bench.write_instances(insts, args.out, args.with_oracle)
    for p in paths:
        print(p)
    return 0


def _oracle(args) -> int:
    rows = []
    for spec in args.instances:
        inst = bench.resolve_instance(spec, args.domain, args.seed)
        sol = bfs_solve(inst.space, inst.start, inst.space.goal, args.max_states)
        rows.append({"instance": inst.name or spec, "distance": None if sol is None else sol.cost})
    if args.format == "json":
        print(json.dumps({"schema": bench.SCHEMA_VERSION, "rows": rows}, indent=2))
    else:
        sep = "," if args.format == "csv" else "  "
        print(sep.join(("instance", "distance")))
        for r in rows:
            print(sep.join((r["instance"], "unsolvable" if r["distance"] is None else str(r["distance"]))))
    return 0 if all(r["distance"] is not None for r in rows) else 3


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"solve": _solve, "bench": _bench, "gen": _gen, "oracle": _oracle}[args.command]
    try:
        return handler(args)
    except (InstanceSyntaxError, ValueError, OSError, OracleLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
