"""Benchmark harness: run requests, result rows, suites and instance generation."""
from __future__ import annotations

import csv
import io
import json
import platform
import random
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .astar import AStarConfig, run_astar
from .bfida import run_bfida
from .domains import Hanoi4, Instance, Pancake, SlidingTile, load_instance, serialize_instance
from .heuristics import parse_heuristic
from .hybrid import DEFAULT_MAX_CALLS, HybridConfig, run_hybrid
from .oracle import bfs_distance
from .space import (BUDGET_EXCEEDED, INF, SOLVED, UNSOLVABLE, Budget, BudgetExceeded, RunStats,
                    SearchResult, validate_solution)

SCHEMA_VERSION = 1
CSV_COLUMNS = ("instance", "algorithm", "peak_stored", "total_generated", "prev_iterations",
               "last_iteration", "time_s", "cost", "status")
DEFAULT_THRESHOLD = 1_000_000
# Rough CPython footprint of one A* node (SearchNode + dict slot + heap entry),
# for converting a memory budget into --threshold.
BYTES_PER_STORED_NODE = 220
EXIT_CODES = {SOLVED: 0, BUDGET_EXCEEDED: 2, UNSOLVABLE: 3}
ALGORITHMS = ("astar", "bfida", "hybrid-inf", "hybrid-k")


@dataclass
class RunRequest:
    instance: str
    algorithm: str = "astar"
    domain: Optional[str] = None
    heuristic: Optional[str] = None
    threshold: Optional[int] = None
    max_calls: Optional[int] = None
    node_budget: Optional[int] = None
    time_budget: Optional[float] = None
    format: str = "table"
    seed: int = 0

    def __post_init__(self):
        parse_algorithm(self.algorithm, self.max_calls)
        for name in ("threshold", "max_calls", "node_budget", "time_budget"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")
        if self.format not in ("table", "csv", "json"):
            raise ValueError(f"unknown output format {self.format!r}")


@dataclass
class ResultRow:
    instance: str
    algorithm: str
    peak_stored: int
    total_generated: int
    prev_iterations: int
    last_iteration: int
    wall_time_seconds: float
    solution_cost: Optional[int]
    status: str
    reconstruction: int = 0
    expansions: int = 0
    heuristic: str = ""
    heuristic_seconds: float = 0.0
    iterations: list = field(default_factory=list)
    call_log: list = field(default_factory=list)
    path: Optional[list] = None

    @property
    def lower_bound(self) -> bool:
        return self.status == BUDGET_EXCEEDED


def parse_algorithm(name: str, max_calls: Optional[int] = None):
    """Return (kind, max_calls) for an algorithm name.

    ``hybrid-inf`` makes one call per depth; ``hybrid-<k>`` caps calls at k;
    ``hybrid-k`` takes k from ``max_calls`` (default 4).
    """
    if name in ("astar", "bfida"):
        return name, None
    if name == "hybrid-inf":
        return "hybrid", None
    if name == "hybrid-k":
        return "hybrid", max_calls or DEFAULT_MAX_CALLS
    m = re.fullmatch(r"hybrid-(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return "hybrid", int(m.group(1))
    raise ValueError(f"unknown algorithm {name!r}; expected one of {', '.join(ALGORITHMS)} or hybrid-<k>")


def resolve_instance(spec: str, domain: Optional[str] = None, seed: int = 0) -> Instance:
    """Instance file path, ``builtin:<name>`` or a seeded generator ``random:<domain>:<knobs>``."""
    if spec.startswith("random:"):
        parts = spec.split(":")[1:]
        inst = generate_instances(parts[0], 1, seed, parts[1:])[0]
        if domain is not None and inst.domain != domain:
            raise ValueError(f"generator makes {inst.domain} instances, not {domain}")
        return inst
    return load_instance(spec, domain)


def run_algorithm(inst: Instance, algorithm: str, h, threshold=None, max_calls=None,
                  budget: Optional[Budget] = None) -> SearchResult:
    kind, calls = parse_algorithm(algorithm, max_calls)
    space, start, goal = inst.space, inst.start, inst.space.goal
    if kind == "astar":
        out = run_astar(space, h, start, goal, AStarConfig(), budget)
        return SearchResult(SOLVED if out.solved else UNSOLVABLE, out.stats, out.solution, "astar")
    if kind == "bfida":
        return run_bfida(space, h, start, goal, budget=budget)
    return run_hybrid(space, h, start, goal, HybridConfig(threshold or DEFAULT_THRESHOLD, calls), budget)


def solve(req: RunRequest, instance: Optional[Instance] = None, keep_path: bool = False):
    """Run one request. Returns (ResultRow, SearchResult or None)."""
    inst = instance or resolve_instance(req.instance, req.domain, req.seed)
    t0 = time.perf_counter()
    h = parse_heuristic(req.heuristic, inst.space)
    h_seconds = time.perf_counter() - t0
    budget = Budget(req.node_budget, req.time_budget) if (req.node_budget or req.time_budget) else None
    name = inst.name or req.instance
    try:
        res = run_algorithm(inst, req.algorithm, h, req.threshold, req.max_calls, budget)
    except BudgetExceeded as exc:
        stats = exc.stats or RunStats()
        return _row(name, req.algorithm, stats, None, BUDGET_EXCEEDED, h, h_seconds), None
    if res.solved:
        check = validate_solution(inst.space, res.solution, inst.start)
        if not check:
            raise AssertionError(f"{req.algorithm} returned an invalid path: {check.reason}")
    row = _row(name, req.algorithm, res.stats, res.cost, res.status, h, h_seconds)
    row.call_log = [
        {"bound": c.bound, "depths": list(c.depths), "seeds": [inst.space.format_state(s) for s in c.seeds],
         "solved": c.solved, "next_f": None if c.next_f == INF else c.next_f, "generated": c.generated}
        for c in res.call_log
    ]
    if keep_path and res.solution is not None:
        row.path = [inst.space.format_state(s) for s in res.solution.states]
    return row, res


def _row(name, algorithm, stats: RunStats, cost, status, h, h_seconds) -> ResultRow:
    return ResultRow(
        instance=name, algorithm=algorithm, peak_stored=stats.peak_stored,
        total_generated=stats.total_generated, prev_iterations=stats.generated_prev_iterations,
        last_iteration=stats.generated_last_iteration, wall_time_seconds=stats.wall_time,
        solution_cost=cost, status=status, reconstruction=stats.generated_reconstruction,
        expansions=stats.expansions, heuristic=h.describe(), heuristic_seconds=h_seconds,
        iterations=stats.as_dict()["iterations"],
    )


def _count(row: ResultRow, value) -> str:
    return f">{value}" if row.lower_bound else str(value)


def _csv_fields(row: ResultRow, timing: bool):
    return [row.instance, row.algorithm, _count(row, row.peak_stored), _count(row, row.total_generated),
            _count(row, row.prev_iterations), _count(row, row.last_iteration),
            f"{row.wall_time_seconds:.3f}" if timing else "-",
            "" if row.solution_cost is None else row.solution_cost, row.status]


def rows_to_csv(rows, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(_csv_fields(r, timing))
    return buf.getvalue()


def rows_to_table(rows, timing: bool = True) -> str:
    header = ["Instance", "Algorithm", "Peak stored", "Total nodes", "Prev. iterations",
              "Last iteration", "Time (s)", "Cost", "Status"]
    body = [[str(x) for x in _csv_fields(r, timing)] for r in rows]
    for line in body:
        for i in (2, 3, 4, 5):
            line[i] = _commas(line[i])
    widths = [max(len(x) for x in col) for col in zip(header, *body)]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for line in body:
        out.append("  ".join(x.rjust(w) if i >= 2 else x.ljust(w)
                             for i, (x, w) in enumerate(zip(line, widths))).rstrip())
    return "\n".join(out) + "\n"


def _commas(s):
    prefix = ">" if s.startswith(">") else ""
    digits = s.lstrip(">")
    return prefix + f"{int(digits):,}" if digits.isdigit() else s


def hardware() -> dict:
    return {"machine": platform.machine(), "processor": platform.processor(),
            "python": platform.python_version(), "system": platform.system()}


def rows_to_json(rows, timing: bool = True, summary: Optional[dict] = None) -> str:
    out = []
    for r in rows:
        d = asdict(r)
        d["total_generated"] = r.total_generated
        d["lower_bound"] = r.lower_bound
        if not timing:
            d.pop("wall_time_seconds")
            d.pop("heuristic_seconds")
        if d.get("path") is None:
            d.pop("path")
        out.append(d)
    doc = {"schema": SCHEMA_VERSION, "rows": out}
    if timing:
        doc["hardware"] = hardware()
    if summary is not None:
        doc["summary"] = summary
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def format_rows(rows, fmt: str, timing: bool = True, summary: Optional[dict] = None) -> str:
    if fmt == "csv":
        return rows_to_csv(rows, timing)
    if fmt == "json":
        return rows_to_json(rows, timing, summary)
    text = rows_to_table(rows, timing)
    if summary is not None:
        text += "\n" + format_summary(summary)
    return text


# --- suites -----------------------------------------------------------------

@dataclass
class SuiteEntry:
    instance: str
    algorithm: str
    options: dict


_SUITE_KEYS = {"heuristic": str, "threshold": int, "max_calls": int, "node_budget": int,
               "time_budget": float, "domain": str, "seed": int}


def parse_suite(text: str, base: Optional[Path] = None) -> list[SuiteEntry]:
    """Suite lines: ``<instance> <algorithm> [key=value ...]``; ``#`` starts a comment."""
    entries = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) < 2:
            raise ValueError(f"suite line {no}: expected '<instance> <algorithm> [key=value ...]'")
        inst, alg = toks[0], toks[1]
        opts = {}
        for tok in toks[2:]:
            key, sep, value = tok.partition("=")
            if not sep or key not in _SUITE_KEYS:
                raise ValueError(f"suite line {no}: bad option {tok!r}")
            opts[key] = _SUITE_KEYS[key](value)
        if base is not None and not inst.startswith(("builtin:", "random:")) and not Path(inst).is_absolute():
            inst = str(base / inst)
        entries.append(SuiteEntry(inst, alg, opts))
    return entries


def _run_entry(entry: SuiteEntry) -> ResultRow:
    try:
        req = RunRequest(entry.instance, entry.algorithm, **entry.options)
        row, _ = solve(req)
        return row
    except Exception as exc:  # per-row failure is recorded, the suite goes on
        return ResultRow(Path(entry.instance).stem, entry.algorithm, 0, 0, 0, 0, 0.0, None,
                         f"error: {type(exc).__name__}: {exc}")


def run_suite(entries, jobs: int = 1) -> list[ResultRow]:
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_run_entry, entries))
    return [_run_entry(e) for e in entries]


def summarize(rows) -> dict:
    """Per-algorithm counts of instances where it has the smallest peak / time."""
    by_inst: dict[str, list[ResultRow]] = {}
    for r in rows:
        if r.status == SOLVED:
            by_inst.setdefault(r.instance, []).append(r)
    wins = {r.algorithm: {"peak_stored": 0, "time": 0} for r in rows}
    compared = [g for g in by_inst.values() if len(g) >= 2]
    for group in compared:
        best_peak = min(r.peak_stored for r in group)
        best_time = min(r.wall_time_seconds for r in group)
        for r in group:
            if r.peak_stored == best_peak:
                wins[r.algorithm]["peak_stored"] += 1
            if r.wall_time_seconds == best_time:
                wins[r.algorithm]["time"] += 1
    return {"instances": len(compared), "wins": wins}


def format_summary(summary: dict) -> str:
    timed = all("time" in w for w in summary["wins"].values())
    what = "Smallest peak stored / shortest time" if timed else "Smallest peak stored"
    lines = [f"{what} over {summary['instances']} instances:"]
    for alg, w in summary["wins"].items():
        extra = f", time {w['time']}" if timed else ""
        lines.append(f"  {alg}: peak {w['peak_stored']}{extra}")
    return "\n".join(lines) + "\n"


# --- instance generation ----------------------------------------------------

def _random_walk(space, length, rng):
    s, prev = space.goal_state, None
    for _ in range(length):
        options = [t for t, _ in space.successors(s) if t != prev]
        prev, s = s, rng.choice(options)
    return s


def generate_instances(domain: str, count: int, seed: int, knobs=()) -> list[Instance]:
    """Deterministic instances from ``seed``.

    Knobs (positional strings): tile ``<W>x<H>`` and walk length (default
    3x3, 30); hanoi4 disc count or range ``lo-hi`` (default 3-6) and
    ``random`` for random start/goal stacks; pancake size (default 8).
    Tile instances are random walks back from the goal, so always solvable.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = random.Random(seed)
    knobs = list(knobs)
    out = []
    if domain == "tile":
        size = knobs[0] if knobs else "3x3"
        m = re.fullmatch(r"(\d+)x(\d+)", size)
        if not m:
            raise ValueError(f"tile size must look like 3x3, got {size!r}")
        walk = int(knobs[1]) if len(knobs) > 1 else 30
        if walk < 0:
            raise ValueError("walk length must be >= 0")
        space = SlidingTile(int(m.group(1)), int(m.group(2)))
        for i in range(count):
            out.append(Instance("tile", space, _random_walk(space, walk, rng), f"tile{size}-w{walk}-s{seed}-{i:03d}"))
    elif domain == "hanoi4":
        spec = knobs[0] if knobs else "3-6"
        lo, _, hi = spec.partition("-")
        lo, hi = int(lo), int(hi or lo)
        if not 1 <= lo <= hi:
            raise ValueError(f"bad disc range {spec!r}")
        scramble = len(knobs) > 1 and knobs[1] == "random"
        for i in range(count):
            d = lo + i % (hi - lo + 1)
            if scramble:
                start = bytes(rng.randrange(4) for _ in range(d))
                goal = bytes(rng.randrange(4) for _ in range(d))
            else:
                start, goal = bytes(d), bytes([3] * d)
            out.append(Instance("hanoi4", Hanoi4(d, goal), start, f"hanoi4-{d}-s{seed}-{i:03d}"))
    elif domain == "pancake":
        n = int(knobs[0]) if knobs else 8
        space = Pancake(n)
        for i in range(count):
            perm = list(range(1, n + 1))
            rng.shuffle(perm)
            out.append(Instance("pancake", space, bytes(perm), f"pancake{n}-s{seed}-{i:03d}"))
    else:
        raise ValueError(f"no generator for domain {domain!r}")
    return out


def write_instances(instances, directory, with_oracle: bool = False) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    oracle_rows = []
    for inst in instances:
        p = directory / f"{inst.name}.txt"
        p.write_text(serialize_instance(inst))
        paths.append(p)
        if with_oracle:
            oracle_rows.append((p.name, bfs_distance(inst.space, inst.start, inst.space.goal)))
    if with_oracle:
        with open(directory / "oracle.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("instance", "distance"))
            w.writerows(oracle_rows)
    return paths
