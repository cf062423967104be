"""Acceptance checks, one test per criterion.

Each test prints a ``[PASS]``/``[FAIL] criterion N`` line; the lines are
also repeated in the terminal summary (see conftest.py).
"""
import contextlib
import dataclasses
import json
import os
import random
import subprocess
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

from hybridsearch import bench
from hybridsearch.astar import run_astar
from hybridsearch.bfhs import run_bfhs
from hybridsearch.bfida import run_bfida
from hybridsearch.domains import ExplicitGraph, SlidingTile, builtin_instance
from hybridsearch.domains.graph import FIGURE1_THRESHOLD, ExplicitGraphInstance
from hybridsearch.heuristics import build_pdb, parse_heuristic
from hybridsearch.hybrid import HybridConfig, run_hybrid
from hybridsearch.oracle import bfs_distance, bfs_distances
from hybridsearch.space import validate_solution

from conftest import ACCEPTANCE

DESK = Path(__file__).parent / "data" / "desk15"


@contextlib.contextmanager
def criterion(n, text):
    try:
        yield
    except BaseException:
        line = f"[FAIL] criterion {n}: {text}"
        ACCEPTANCE.append(line)
        print(line)
        raise
    line = f"[PASS] criterion {n}: {text}"
    ACCEPTANCE.append(line)
    print(line)


# --- shared oracle suite ------------------------------------------------------

class Probe:
    """on_expand hook: counts expansions per call and the live-layer high-water mark."""

    def __init__(self, layers):
        self.layers = layers
        self.undirected = layers == 2
        self.violations = []
        self.max_layers = 0
        self.seen = Counter()

    def new_call(self):
        self.seen.clear()

    def __call__(self, state, depth, store):
        key = state if self.undirected else (state, depth)
        self.seen[key] += 1
        if self.seen[key] == 2:
            self.violations.append((state, depth))
        self.max_layers = max(self.max_layers, store.resident_layers)


def _oracle_instances():
    insts = []
    insts += bench.generate_instances("tile", 120, 101, ["3x3", "60"])
    insts += bench.generate_instances("hanoi4", 40, 102, ["3-6", "random"])
    for n, seed in ((6, 103), (7, 104), (8, 105)):
        insts += bench.generate_instances("pancake", 14 if n < 8 else 12, seed, [str(n)])
    return insts


def _run_all(space, h, start, goal, threshold, probe, failed_calls):
    out = {}
    out["astar"] = run_astar(space, h, start, goal)

    def on_bfida_call(call, res):
        probe.new_call()
        if not res.solved:
            failed_calls.append((space, h, call, res.signature()))

    def on_hybrid_call(call, res, fs):
        probe.new_call()
        if not res.solved:
            failed_calls.append((space, h, call, res.signature()))

    # the probe's per-call counter is reset after each call; reset once up front too
    probe.new_call()
    out["bfida"] = run_bfida(space, h, start, goal, on_expand=probe, on_call=on_bfida_call)
    for name, calls in (("hybrid-inf", None), ("hybrid-4", 4)):
        probe.new_call()
        out[name] = run_hybrid(space, h, start, goal, HybridConfig(threshold, calls),
                               on_expand=probe, on_call=on_hybrid_call)
    return out


@pytest.fixture(scope="module")
def oracle_suite():
    started = time.perf_counter()
    heuristics = {}
    records = []
    failed_calls = []
    probe = Probe(2)
    for inst in _oracle_instances():
        space = inst.space
        key = space.domain_id
        if key not in heuristics:
            heuristics[key] = parse_heuristic(None, space)
        h = heuristics[key]
        cost = bfs_distance(space, inst.start, space.goal)
        a_peak = run_astar(space, h, inst.start, space.goal).stats.peak_stored
        threshold = max(1, a_peak // 4)
        results = _run_all(space, h, inst.start, space.goal, threshold, probe, failed_calls)
        records.append((inst, h, cost, results))
    return {"records": records, "failed_calls": failed_calls, "probe": probe,
            "seconds": time.perf_counter() - started}


# --- 1 ------------------------------------------------------------------------

def test_criterion_1_oracle_optimality(oracle_suite):
    records = oracle_suite["records"]
    with criterion(1, f"{len(records)} instances, every algorithm matches the BFS oracle "
                      f"({oracle_suite['seconds']:.0f}s)"):
        assert len(records) >= 200
        domains = Counter(inst.domain for inst, *_ in records)
        assert set(domains) == {"tile", "hanoi4", "pancake"}
        bad = []
        for inst, _, cost, results in records:
            assert cost is not None
            for alg, res in results.items():
                sol = res.solution
                if sol is None or sol.cost != cost or not validate_solution(inst.space, sol, inst.start):
                    bad.append((inst.name, alg))
        assert not bad, bad[:10]
        assert oracle_suite["seconds"] < 600


# --- 2 ------------------------------------------------------------------------

def test_criterion_2_figure1_worked_example():
    inst = builtin_instance("figure1")
    space = inst.space
    h = parse_heuristic(None, space)
    fmt = space.format_state
    calls = []
    set_f = {}

    def on_call(call, out, fs):
        seeds = [fmt(s.state) for s in call.seeds]
        calls.append((call.bound, seeds, "solved" if out.solved else out.next_f))
        if not out.solved:
            for s in seeds:
                set_f[s] = out.next_f

    with criterion(2, "figure1 call log, seed sets, order and f-updates match the worked example"):
        res = run_hybrid(space, h, inst.start, space.goal, HybridConfig(FIGURE1_THRESHOLD, None), on_call=on_call)
        assert calls == [
            (8, ["H", "I", "J", "K"], 9),
            (8, ["E", "F"], 9),
            (8, ["B"], 10),
            (9, ["H", "I", "J", "K"], "solved"),
        ]
        assert set_f == {"E": 9, "F": 9, "H": 9, "I": 9, "J": 9, "K": 9, "B": 10}
        assert res.cost == 9 and validate_solution(space, res.solution, inst.start)
        # capping at 4 calls changes nothing here: there are only three depths
        res4 = run_hybrid(space, h, inst.start, space.goal, HybridConfig(FIGURE1_THRESHOLD, 4))
        assert [(c.bound, c.solved) for c in res4.call_log] == [(8, False)] * 3 + [(9, True)]


# --- 3 and 4 --------------------------------------------------------------------

@pytest.fixture(scope="module")
def desk_rows():
    entries = bench.parse_suite((DESK / "suite.txt").read_text(), DESK)
    started = time.perf_counter()
    rows = bench.run_suite(entries)
    by = {}
    for r in rows:
        assert r.status == "solved", (r.instance, r.algorithm, r.status)
        by.setdefault(r.instance, {})[r.algorithm] = r
    return by, time.perf_counter() - started


def test_desk_suite_matches_frozen_counts(desk_rows):
    """Regression pin: exact node counts recorded when the suite was generated."""
    by, _ = desk_rows
    frozen = json.loads((DESK / "counts.json").read_text())
    assert sorted(by) == sorted(frozen)
    for name, algs in frozen.items():
        for alg, want in algs.items():
            if alg == "threshold":
                continue
            r = by[name][alg]
            got = {"cost": r.solution_cost, "peak_stored": r.peak_stored,
                   "total_generated": r.total_generated, "last_iteration": r.last_iteration}
            assert got == want, (name, alg)


def test_criterion_3_memory(desk_rows):
    by, seconds = desk_rows
    n = len(by)
    below_astar = sum(r["hybrid-inf"].peak_stored < r["astar"].peak_stored for r in by.values())
    within_2x = sum(r["hybrid-inf"].peak_stored <= 2 * r["bfida"].peak_stored for r in by.values())
    with criterion(3, f"hybrid peak < A* peak on {below_astar}/{n}; <= 2x BFIDA* peak on {within_2x}/{n} "
                      f"({seconds:.0f}s)"):
        assert n == 30
        for r in by.values():
            assert r["hybrid-inf"].call_log, "threshold did not force phase 2"
            assert len({x.solution_cost for x in r.values()}) == 1
        assert below_astar == n
        assert within_2x >= 0.8 * n
        assert seconds < 1800


def test_criterion_4_early_termination(desk_rows):
    by, _ = desk_rows
    n = len(by)
    wins = sum(r["hybrid-inf"].last_iteration < r["bfida"].last_iteration for r in by.values())
    with criterion(4, f"hybrid last-iteration nodes < BFIDA* on {wins}/{n}"):
        assert wins >= 0.7 * n


# --- 5 ------------------------------------------------------------------------

def _random_digraph(rng, n):
    names = [f"v{i}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        edges.add((names[rng.randrange(i)], names[i]))  # everything reachable from v0
    while len(edges) < 3 * n:
        a, b = rng.sample(names, 2)
        edges.add((a, b))
    goal = names[-1]
    # h = half the distance to the goal; dead ends get n, so h stays consistent
    rev = {}
    for a, b in edges:
        rev.setdefault(b, []).append(a)
    dist = {goal: 0}
    frontier = [goal]
    while frontier:
        nxt = []
        for v in frontier:
            for u in rev.get(v, ()):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    h = {v: dist[v] // 2 if v in dist else n for v in names}
    return ExplicitGraph(ExplicitGraphInstance(names, h, sorted(edges), names[0], [goal]))


def test_criterion_5_duplicate_detection(oracle_suite):
    probe = oracle_suite["probe"]
    directed = Probe(3)
    rng = random.Random(55)
    graphs = [builtin_instance("figure1").space] + [_random_digraph(rng, rng.randrange(8, 40)) for _ in range(40)]
    solved = 0
    for space in graphs:
        h = parse_heuristic("table", space)
        if bfs_distance(space, space.start, space.goal) is None:
            continue
        directed.new_call()
        res = run_bfida(space, h, space.start, space.goal, on_expand=directed,
                        on_call=lambda call, out: directed.new_call())
        solved += res.solved
    with criterion(5, f"0 re-expansions in undirected calls, 0 same-depth re-expansions on {solved} digraphs, "
                      f"live layers <= {probe.max_layers}/{directed.max_layers}"):
        assert probe.violations == []
        assert directed.violations == []
        assert probe.max_layers <= 2 + 1
        assert directed.max_layers <= 3 + 1
        assert solved >= 30


# --- 6 ------------------------------------------------------------------------

def test_criterion_6_bound_progression(oracle_suite, desk_rows):
    failed = oracle_suite["failed_calls"]
    rng = random.Random(66)
    sample = rng.sample(failed, 20)
    with criterion(6, f"bounds strictly increase, next_f > bound on {len(failed)} failed calls, "
                      f"20 reruns at next_f-1 identical"):
        runs = [res.stats.iterations for *_, results in oracle_suite["records"] for res in results.values()]
        runs += [r.iterations for algs in desk_rows[0].values() for r in algs.values()]
        for iters in runs:
            bounds = [it["bound"] if isinstance(it, dict) else it.bound for it in iters]
            assert all(a < b for a, b in zip(bounds, bounds[1:])), bounds
        for _, _, call, sig in failed:
            assert sig[2] > call.bound
        for space, h, call, sig in sample:
            again = run_bfhs(space, h, dataclasses.replace(call, bound=sig[2] - 1), space.goal)
            assert not again.solved and again.signature()[2:] == sig[2:]


# --- 7 ------------------------------------------------------------------------

def test_criterion_7_easy_threshold_equivalence():
    space = SlidingTile(3, 3)
    h = parse_heuristic("manhattan", space)
    insts = bench.generate_instances("tile", 50, 707, ["3x3", "50"])
    same = 0
    for inst in insts:
        a = run_astar(space, h, inst.start, space.goal)
        y = run_hybrid(space, h, inst.start, space.goal, HybridConfig(10**7))
        if (a.solution.cost, a.stats.total_generated, a.stats.expansions) == \
                (y.cost, y.stats.total_generated, y.stats.expansions) and not y.call_log:
            same += 1
    with criterion(7, f"hybrid with a large threshold is identical to A* on {same}/50 instances"):
        assert same == 50


# --- 8 ------------------------------------------------------------------------

def test_criterion_8_reconstruction(oracle_suite):
    checked_relay = checked_origin = 0
    with criterion(8, "relay and origin splits add up to C*; reconstruction only after phase 2"):
        for inst, _, cost, results in oracle_suite["records"]:
            space, start = inst.space, inst.start
            b = results["bfida"]
            if b.relay is not None:
                before = bfs_distance(space, start, lambda s, r=b.relay: s == r)
                after = bfs_distance(space, b.relay, space.goal)
                assert before == b.relay_depth and before + after == cost
                checked_relay += 1
            for alg in ("hybrid-inf", "hybrid-4"):
                y = results[alg]
                if y.call_log:
                    assert y.stats.generated_reconstruction > 0
                    assert y.origin_g + bfs_distance(space, y.origin, space.goal) == cost
                    checked_origin += 1
                else:
                    assert y.stats.generated_reconstruction == 0
        assert checked_relay >= 150 and checked_origin >= 150
    print(f"  relay splits checked: {checked_relay}, origin splits checked: {checked_origin}")


# --- 9 ------------------------------------------------------------------------

def test_criterion_9_heuristic_soundness():
    from hybridsearch.domains import Hanoi4, Pancake
    cases = [
        (SlidingTile(3, 3), "pdb:0,1,2,3"),
        (SlidingTile(3, 3), "pdb:1,2,3,4,5"),
        (SlidingTile(3, 3), "manhattan;pdb:5,6,7,8"),
        (Pancake(8), "pdb:4,5,6,7,8"),
        (Hanoi4(6), "pdb:2,3,4,5"),
    ]
    violations = 0
    edges = 0
    rng = random.Random(99)
    for space, spec in cases:
        h = parse_heuristic(spec, space)
        dist = bfs_distances(space, space.goal_state)
        states = sorted(dist)
        for s in rng.sample(states, 500):
            violations += h(s) > dist[s]
        for _ in range(20):
            s = space.goal_state
            for _ in range(60):
                for t, _ in space.successors(s):
                    edges += 1
                    violations += abs(h(s) - h(t)) > 1
                s = rng.choice(space.successors(s))[0]
    big = SlidingTile(4, 4)
    h = build_pdb(big, [0, 1, 2, 3])
    for _ in range(50):
        s = big.goal_state
        for _ in range(100):
            for t, _ in big.successors(s):
                edges += 1
                violations += abs(h(s) - h(t)) > 1
            s = rng.choice(big.successors(s))[0]
    with criterion(9, f"{violations} violations over {5 * 500} dominance checks and {edges} edge checks"):
        assert violations == 0


# --- 10 -----------------------------------------------------------------------

def test_criterion_10_determinism(tmp_path):
    argv = [sys.executable, "-m", "hybridsearch", "solve", "--instance", "random:tile:3x3:40", "--seed", "10",
            "--algorithm", "hybrid-4", "--threshold", "200", "--format", "csv", "--no-timing"]
    outs = []
    for hash_seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=hash_seed)
        outs.append(subprocess.run(argv, capture_output=True, env=env, check=True).stdout)
    suite = tmp_path / "suite.txt"
    lines = [f"{DESK / 'tile4x4-w50-s2024-004.txt'} {alg} heuristic=manhattan threshold=20"
             for alg in ("astar", "bfida", "hybrid-inf", "hybrid-2")]
    suite.write_text("\n".join(lines) + "\n")
    bench_argv = [sys.executable, "-m", "hybridsearch", "bench", str(suite), "--format", "csv", "--no-timing"]
    for hash_seed in ("3", "4"):
        env = dict(os.environ, PYTHONHASHSEED=hash_seed)
        outs.append(subprocess.run(bench_argv, capture_output=True, env=env, check=True).stdout)
    with criterion(10, "identical request and seed give byte-identical csv across runs"):
        assert outs[0] == outs[1] and b"solved" in outs[0]
        assert outs[2] == outs[3] and outs[2].count(b"solved") == 4
