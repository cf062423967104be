"""A* with full duplicate detection and an optional stored-node threshold.

Open is a binary heap ordered by (f, h, insertion order): among nodes of
equal f the one with the smallest h is expanded first, and FIFO settles the
rest. Goals are tested when a node is selected for expansion.

With ``node_threshold`` set, the search stops before any expansion that
would push the number of stored nodes (Open + Closed) past the threshold
and hands back the Open list as a frontier, together with the node store.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from itertools import count
from typing import Callable, Optional

from .space import (INF, Budget, BudgetExceeded, IterationStats, PackedState,
                    RunStats, SearchNode, Solution, StateSpace)

SOLVED = "solved"
THRESHOLD = "threshold"
EXHAUSTED = "exhausted"


@dataclass
class AStarConfig:
    node_threshold: Optional[int] = None
    cost_bound: Optional[int] = None  # prune f > cost_bound
    g_bound: Optional[int] = None  # prune g >= g_bound
    tie_break: str = "min-h"

    def __post_init__(self):
        for name in ("node_threshold", "cost_bound", "g_bound"):
            v = getattr(self, name)
            if v is not None and v <= 0 and not (name == "cost_bound" and v == 0):
                raise ValueError(f"{name} must be positive, got {v}")
        if self.tie_break != "min-h":
            raise ValueError("only the min-h tie-break policy is supported")


@dataclass
class AStarOutcome:
    status: str
    stats: RunStats
    solution: Optional[Solution] = None
    frontier: list[SearchNode] = field(default_factory=list)
    store: dict[PackedState, SearchNode] = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def path_to(store: dict, state: PackedState) -> list[PackedState]:
    """Follow parent links from ``state`` back to the root of ``store``."""
    path = []
    node = store[state]
    while node is not None:
        path.append(node.state)
        node = store[node.parent] if node.parent is not None else None
    path.reverse()
    return path


def run_astar(space: StateSpace, h, start: PackedState, goal_test: Callable[[PackedState], bool],
              config: Optional[AStarConfig] = None, budget: Optional[Budget] = None,
              on_pop=None) -> AStarOutcome:
    """Run A* from ``start``.

    ``on_pop(node, open_nodes)`` is called at every selection with the popped
    node and a zero-argument callable listing the remaining live Open nodes;
    it exists for instrumentation in tests.
    """
    config = config or AStarConfig()
    started = time.perf_counter()
    stats = RunStats()
    threshold = config.node_threshold
    cost_bound = INF if config.cost_bound is None else config.cost_bound
    g_bound = INF if config.g_bound is None else config.g_bound

    h0 = h(start)
    stats.heuristic_evaluations = 1
    store: dict[PackedState, SearchNode] = {}
    if h0 == INF or h0 > cost_bound:
        stats.wall_time = time.perf_counter() - started
        return AStarOutcome(EXHAUSTED, stats)
    root = SearchNode(start, 0, h0)
    store[start] = root
    seq = count()
    heap = [(h0, h0, next(seq), root)]
    push, pop = heapq.heappush, heapq.heappop
    succ = space.successors

    generated = 0
    expanded = 0
    evals = 1
    # per f-level accounting; the last level counts as the "last iteration"
    level_f = None
    level_gen0 = 0
    level_exp0 = 0
    iterations = stats.iterations

    def live_open():
        return [e[3] for e in heap if store.get(e[3].state) is e[3] and not e[3].closed]

    def close_level():
        iterations.append(IterationStats(level_f, generated - level_gen0, expanded - level_exp0, len(store)))

    def finish(status, **kw):
        if level_f is not None:
            close_level()
        stats.expansions = expanded
        stats.heuristic_evaluations = evals
        stats.peak_stored = len(store)
        last = generated - level_gen0 if level_f is not None else 0
        stats.generated_prev_iterations = generated - last
        stats.generated_last_iteration = last
        stats.wall_time = time.perf_counter() - started
        return AStarOutcome(status, stats, store=store, **kw)

    try:
        while heap:
            entry = pop(heap)
            node = entry[3]
            if node.closed or store.get(node.state) is not node:
                continue
            f = entry[0]
            if f != level_f:
                if level_f is not None:
                    close_level()
                level_f, level_gen0, level_exp0 = f, generated, expanded
            if on_pop is not None:
                on_pop(node, live_open)
            state = node.state
            if goal_test(state):
                sol = Solution(node.g, path_to(store, state))
                stats.solution_cost = node.g
                return finish(SOLVED, solution=sol)

            g = node.g + 1
            children = succ(state)
            gen = len(children)
            kept = []
            if g < g_bound:
                for t, _ in children:
                    old = store.get(t)
                    if old is not None and old.g <= g:
                        continue
                    ht = h(t)
                    evals += 1
                    if g + ht > cost_bound:
                        continue
                    kept.append((t, ht, old))
            if threshold is not None:
                new = sum(1 for k in kept if k[2] is None)
                if len(store) + new > threshold:
                    push(heap, entry)
                    frontier = [n for n in store.values() if not n.closed]
                    return finish(THRESHOLD, frontier=frontier)
            node.closed = True
            expanded += 1
            generated += gen
            for t, ht, old in kept:
                if old is not None and old.closed:
                    # unreachable with a consistent heuristic; never reopen
                    continue
                child = SearchNode(t, g, ht, state)
                store[t] = child
                push(heap, (g + ht, ht, next(seq), child))
            if budget is not None:
                budget.spend(gen)
    except BudgetExceeded as exc:
        if exc.stats is None:
            exc.stats = finish(EXHAUSTED).stats
        raise
    return finish(EXHAUSTED)
