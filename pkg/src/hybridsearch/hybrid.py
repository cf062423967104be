"""A*+BFHS.

Phase 1 runs A* until the stored-node threshold would be exceeded. Its Open
nodes become frontier nodes. Phase 2 repeats iterations: the bound is the
smallest f of any live frontier set; the frontier nodes at that f are split
by depth into at most ``max_calls`` groups of adjacent depths, and BFHS is
called on each group, deepest group first. The first call that reaches a
goal ends the search. A failed call raises its set's f to the call's
``next_f``.

BFHS nodes remember the frontier node they descend from, so the path is the
A*-phase path to that node plus one bounded A* search from it.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .astar import EXHAUSTED, AStarConfig, path_to, run_astar
from .bfhs import BfhsCall, BfhsOutcome, Seed, run_bfhs
from .space import (INF, SOLVED, UNSOLVABLE, Budget, BudgetExceeded, ConsistencyError,
                    Goal, IterationStats, PackedState, RunStats, SearchNode, SearchResult,
                    Solution, StateSpace, validate_solution)

DEFAULT_MAX_CALLS = 4


@dataclass
class HybridConfig:
    node_threshold: int
    max_calls: Optional[int] = DEFAULT_MAX_CALLS  # None = one call per depth

    def __post_init__(self):
        if self.node_threshold is None or self.node_threshold < 1:
            raise ValueError("node_threshold must be a positive integer")
        if self.max_calls is not None and self.max_calls != INF and self.max_calls < 1:
            raise ValueError("max_calls must be >= 1")


@dataclass
class FrontierSet:
    members: list[SearchNode]
    depth_range: tuple[int, int]
    current_f: float

    @property
    def retired(self) -> bool:
        return self.current_f == INF

    @classmethod
    def of(cls, members, f):
        gs = [n.g for n in members]
        return cls(list(members), (min(gs), max(gs)), f)


@dataclass
class CallRecord:
    bound: int
    depths: tuple[int, ...]
    seeds: list[PackedState]
    solved: bool
    next_f: float
    generated: int
    peak_stored: int


def partition_frontier(nodes, max_calls=None) -> list[list[SearchNode]]:
    """Split frontier nodes into call groups, deepest group first.

    Each group covers adjacent depths; a group's seeds are ordered by
    increasing depth (then by their order in ``nodes``). With
    ``max_calls=None`` every depth gets its own call; otherwise depths are
    cut into chunks of ``ceil(D / max_calls)`` starting from the deepest, so
    only the shallowest chunk can be short.
    """
    if not nodes:
        raise ValueError("no frontier nodes to partition")
    by_depth: dict[int, list] = {}
    for n in nodes:
        by_depth.setdefault(n.g, []).append(n)
    depths = sorted(by_depth, reverse=True)
    if max_calls is None or max_calls == INF:
        size = 1
    else:
        size = math.ceil(len(depths) / max_calls)
    groups = []
    for i in range(0, len(depths), size):
        chunk = sorted(depths[i:i + size])
        groups.append([n for d in chunk for n in by_depth[d]])
    return groups


def update_set_f(fs: FrontierSet, outcome: BfhsOutcome) -> FrontierSet:
    if outcome.solved:
        raise ValueError("a solved call ends the search; its set is not updated")
    if not outcome.next_f > fs.current_f:
        raise ConsistencyError(f"set f would not increase ({fs.current_f} -> {outcome.next_f})")
    fs.current_f = outcome.next_f
    return fs


def reconstruct_single(space: StateSpace, h, origin: PackedState, cost: int, store: dict,
                       goal_test, stats: Optional[RunStats] = None, budget: Optional[Budget] = None) -> Solution:
    """A*-phase path to ``origin`` followed by a bounded A* from ``origin`` to a goal."""
    prefix = path_to(store, origin)
    origin_g = store[origin].g
    out = run_astar(space, h, origin, goal_test, AStarConfig(cost_bound=cost - origin_g), budget)
    if stats is not None:
        stats.generated_reconstruction += out.stats.total_generated
        stats.heuristic_evaluations += out.stats.heuristic_evaluations
    if not out.solved or out.solution.cost != cost - origin_g:
        raise ConsistencyError("no path from the ancestral frontier node within the optimal cost")
    sol = Solution(cost, prefix + out.solution.states[1:])
    goal = goal_test if isinstance(goal_test, Goal) else Goal(predicate=goal_test)
    check = validate_solution(space, sol, prefix[0], goal)
    if not check:
        raise ConsistencyError(f"rebuilt path is invalid: {check.reason}")
    return sol


def run_hybrid(space: StateSpace, h, start: PackedState, goal_test: Callable[[PackedState], bool],
               config: HybridConfig, budget: Optional[Budget] = None,
               on_expand=None, on_call=None) -> SearchResult:
    """Solve with A*+BFHS.

    ``on_call(call, outcome, frontier_set)`` observes each BFHS call;
    ``on_expand`` is passed to every BFHS call.
    """
    started = time.perf_counter()
    phase1 = run_astar(space, h, start, goal_test, AStarConfig(node_threshold=config.node_threshold), budget)
    if phase1.solved:
        return SearchResult(SOLVED, phase1.stats, phase1.solution, "hybrid")
    if phase1.status == EXHAUSTED:
        return SearchResult(UNSOLVABLE, phase1.stats, None, "hybrid")

    store = phase1.store
    base = len(store)
    stats = RunStats(peak_stored=base)
    stats.generated_prev_iterations = phase1.stats.total_generated
    stats.expansions = phase1.stats.expansions
    stats.heuristic_evaluations = phase1.stats.heuristic_evaluations

    order = {n.state: i for i, n in enumerate(phase1.frontier)}
    sets: dict[tuple, list] = {}
    for n in phase1.frontier:
        sets.setdefault((n.f, n.g), []).append(n)
    live = [FrontierSet.of(m, f) for (f, _), m in sets.items()]
    log: list[CallRecord] = []
    max_calls = config.max_calls

    try:
        while True:
            live = [s for s in live if not s.retired]
            if not live:
                break
            bound = min(s.current_f for s in live)
            due = [s for s in live if s.current_f == bound]
            rest = [s for s in live if s.current_f != bound]
            members = sorted((n for s in due for n in s.members), key=lambda n: order[n.state])
            it = IterationStats(bound, 0, 0, base)
            stats.iterations.append(it)
            updated = []
            for group in partition_frontier(members, max_calls):
                fs = FrontierSet.of(group, bound)
                call = BfhsCall(bound, [Seed(n.state, n.g, n.state) for n in group], external_store=store)
                out = run_bfhs(space, h, call, goal_test, budget, on_expand)
                s = out.stats
                it.generated += s.generated
                it.expanded += s.expanded
                it.peak_stored = max(it.peak_stored, base + s.peak_stored)
                stats.expansions += s.expanded
                stats.heuristic_evaluations += s.heuristic_evaluations
                stats.peak_stored = max(stats.peak_stored, base + s.peak_stored)
                log.append(CallRecord(bound, tuple(sorted({n.g for n in group}, reverse=True)),
                                      [n.state for n in group], out.solved, out.next_f,
                                      s.generated, s.peak_stored))
                if on_call is not None:
                    on_call(call, out, fs)
                if out.solved:
                    stats.generated_last_iteration = it.generated
                    stats.solution_cost = out.cost
                    sol = reconstruct_single(space, h, out.origin, out.cost, store, goal_test, stats, budget)
                    stats.wall_time = time.perf_counter() - started
                    return SearchResult(SOLVED, stats, sol, "hybrid", origin=out.origin,
                                        origin_g=store[out.origin].g, call_log=log)
                updated.append(update_set_f(fs, out))
            stats.generated_prev_iterations += it.generated
            live = rest + updated
    except BudgetExceeded as exc:
        stats.wall_time = time.perf_counter() - started
        exc.stats = stats
        raise
    stats.wall_time = time.perf_counter() - started
    return SearchResult(UNSOLVABLE, stats, None, "hybrid", call_log=log)
