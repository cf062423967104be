"""Breadth-first iterative-deepening A*.

Each iteration runs BFHS from the start with bound = the previous
iteration's ``next_f`` (the first bound is h(start)). A relay layer at a
fixed fraction of the bound (1/4 by default) lets the solution path be
rebuilt with two A* subsearches once the optimal cost is known.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .astar import AStarConfig, run_astar
from .bfhs import BfhsCall, Seed, run_bfhs
from .space import (INF, SOLVED, UNSOLVABLE, Budget, BudgetExceeded, ConsistencyError,
                    Goal, IterationStats, PackedState, RunStats, SearchResult, Solution,
                    StateSpace, validate_solution)


@dataclass
class BfidaConfig:
    relay_fraction: Fraction = Fraction(1, 4)

    def __post_init__(self):
        self.relay_fraction = Fraction(self.relay_fraction)
        if not 0 < self.relay_fraction < 1:
            raise ValueError("relay_fraction must lie strictly between 0 and 1")

    def relay_depth(self, bound: int) -> int:
        return math.floor(self.relay_fraction * bound)


def run_bfida(space: StateSpace, h, start: PackedState, goal_test: Callable[[PackedState], bool],
              config: Optional[BfidaConfig] = None, budget: Optional[Budget] = None,
              on_expand=None, on_call=None) -> SearchResult:
    """Iterate BFHS from ``start`` with increasing bounds.

    ``on_call(call, outcome)`` sees every BFHS call (instrumentation).
    """
    config = config or BfidaConfig()
    started = time.perf_counter()
    stats = RunStats()
    bound = h(start)
    stats.heuristic_evaluations = 1
    try:
        while bound != INF:
            call = BfhsCall(bound, [Seed(start, 0)], relay_depth=config.relay_depth(bound))
            out = run_bfhs(space, h, call, goal_test, budget, on_expand)
            if on_call is not None:
                on_call(call, out)
            s = out.stats
            stats.iterations.append(IterationStats(bound, s.generated, s.expanded, s.peak_stored))
            stats.expansions += s.expanded
            stats.heuristic_evaluations += s.heuristic_evaluations
            stats.peak_stored = max(stats.peak_stored, s.peak_stored)
            if out.solved:
                stats.generated_last_iteration = s.generated
                stats.solution_cost = out.cost
                sol = reconstruct_two_phase(space, h, start, out.relay, out.relay_depth, out.cost,
                                            goal_test, stats, budget)
                stats.wall_time = time.perf_counter() - started
                return SearchResult(SOLVED, stats, sol, "bfida", relay=out.relay, relay_depth=out.relay_depth)
            stats.generated_prev_iterations += s.generated
            if out.next_f <= bound:
                raise ConsistencyError(f"next bound {out.next_f} does not exceed {bound}")
            bound = out.next_f
    except BudgetExceeded as exc:
        stats.wall_time = time.perf_counter() - started
        exc.stats = stats
        raise
    stats.wall_time = time.perf_counter() - started
    return SearchResult(UNSOLVABLE, stats, None, "bfida")


def reconstruct_two_phase(space: StateSpace, h, start: PackedState, relay: Optional[PackedState],
                          relay_depth: Optional[int], cost: int, goal_test, stats: Optional[RunStats] = None,
                          budget: Optional[Budget] = None, on_pop=None) -> Solution:
    """Rebuild a cost-``cost`` path through ``relay`` with two A* searches.

    The first search runs start -> relay with the original goal heuristic,
    pruning nodes deeper than the relay and nodes with f > cost. The second
    runs relay -> goal pruning f > cost - relay_depth. ``on_pop`` observes
    the first search.
    """
    if relay is None:
        # goal at or above the relay layer: one bounded search does it
        out = run_astar(space, h, start, goal_test, AStarConfig(cost_bound=cost), budget)
        _charge(stats, out)
        if not out.solved or out.solution.cost != cost:
            raise ConsistencyError("bounded A* failed to rebuild the path")
        return out.solution

    first = run_astar(space, h, start, lambda s: s == relay,
                      AStarConfig(cost_bound=cost, g_bound=relay_depth + 1), budget, on_pop)
    _charge(stats, first)
    if not first.solved or first.solution.cost != relay_depth:
        raise ConsistencyError("relay node not reachable at its recorded depth")
    second = run_astar(space, h, relay, goal_test, AStarConfig(cost_bound=cost - relay_depth), budget)
    _charge(stats, second)
    if not second.solved or second.solution.cost != cost - relay_depth:
        raise ConsistencyError("goal not reachable from the relay node within the optimal cost")
    sol = Solution(cost, first.solution.states + second.solution.states[1:])
    check = validate_solution(space, sol, start, _as_goal(space, goal_test))
    if not check:
        raise ConsistencyError(f"rebuilt path is invalid: {check.reason}")
    return sol


def _charge(stats, outcome):
    if stats is not None:
        stats.generated_reconstruction += outcome.stats.total_generated
        stats.heuristic_evaluations += outcome.stats.heuristic_evaluations


def _as_goal(space, goal_test):
    return goal_test if isinstance(goal_test, Goal) else Goal(predicate=goal_test)
