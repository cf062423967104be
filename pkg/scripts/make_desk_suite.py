"""Regenerate the 15-puzzle desk suite under tests/data/desk15.

Writes 30 seeded random-walk instances, a suite file that runs astar, bfida
and hybrid-inf on each, and counts.json with the exact node counts of every
run (used as a regression pin). The hybrid threshold of each instance is a
tenth of A*'s peak, so phase 2 always runs.

    python3 scripts/make_desk_suite.py
"""
import argparse
import json
from pathlib import Path

from hybridsearch import bench
from hybridsearch.heuristics import parse_heuristic

HEURISTIC = "manhattan;pdb:0,1,2,3"
ALGORITHMS = ("astar", "bfida", "hybrid-inf")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests/data/desk15")
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--walk", type=int, default=50)
    args = ap.parse_args()

    insts = bench.generate_instances("tile", args.count, args.seed, ["4x4", str(args.walk)])
    bench.write_instances(insts, args.out)
    h = parse_heuristic(HEURISTIC, insts[0].space)
    lines = [f"# 15-puzzle desk suite: seed {args.seed}, walk {args.walk}, regenerate with scripts/make_desk_suite.py"]
    counts = {}
    for inst in insts:
        a = bench.run_algorithm(inst, "astar", h)
        threshold = max(1, a.stats.peak_stored // 10)
        results = {"astar": a, "bfida": bench.run_algorithm(inst, "bfida", h),
                   "hybrid-inf": bench.run_algorithm(inst, "hybrid-inf", h, threshold)}
        for alg in ALGORITHMS:
            opt = f" threshold={threshold}" if alg.startswith("hybrid") else ""
            lines.append(f"{inst.name}.txt {alg} heuristic={HEURISTIC}{opt}")
        counts[inst.name] = {"threshold": threshold, **{
            alg: {"cost": r.cost, "peak_stored": r.stats.peak_stored,
                  "total_generated": r.stats.total_generated,
                  "last_iteration": r.stats.generated_last_iteration}
            for alg, r in results.items()}}
        print(inst.name, {k: v["peak_stored"] for k, v in counts[inst.name].items() if k != "threshold"})
    (args.out / "suite.txt").write_text("\n".join(lines) + "\n")
    (args.out / "counts.json").write_text(json.dumps(counts, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
