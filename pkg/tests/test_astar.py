import random

import pytest

from hybridsearch import AStarConfig, run_astar, validate_solution
from hybridsearch.astar import EXHAUSTED, THRESHOLD, path_to
from hybridsearch.bench import generate_instances
from hybridsearch.domains import Pancake
from hybridsearch.domains.graph import FIGURE1_THRESHOLD
from hybridsearch.heuristics import parse_heuristic
from hybridsearch.oracle import bfs_distance, bfs_solve
from hybridsearch.space import Goal


def test_pops_min_f_then_min_h(tile8, tile8_manhattan):
    inst = generate_instances("tile", 1, 5, ["3x3", "24"])[0]
    seen = []

    def check(node, live):
        rest = live()
        if rest:
            assert (node.f, node.h) <= min((n.f, n.h) for n in rest)
        seen.append(node)

    out = run_astar(tile8, tile8_manhattan, inst.start, tile8.goal, on_pop=check)
    assert out.solved and len(seen) == out.stats.expansions + 1


def test_figure1_threshold_frontier(figure1):
    space = figure1.space
    h = parse_heuristic(None, space)
    out = run_astar(space, h, figure1.start, space.goal, AStarConfig(node_threshold=FIGURE1_THRESHOLD))
    assert out.status == THRESHOLD
    assert len(out.store) == FIGURE1_THRESHOLD
    front = sorted((space.format_state(n.state), n.g, n.f) for n in out.frontier)
    assert front == [("B", 1, 8), ("E", 2, 8), ("F", 2, 8), ("H", 3, 8), ("I", 3, 8), ("J", 3, 8), ("K", 3, 8)]
    closed = sorted(space.format_state(n.state) for n in out.store.values() if n.closed)
    assert closed == ["A", "C", "D", "G", "S"]
    assert [space.format_state(s) for s in path_to(out.store, space.pack("H"))] == ["S", "A", "D", "H"]


def test_threshold_frontier_covers_an_optimal_path(tile8, tile8_manhattan):
    for inst in generate_instances("tile", 10, 31, ["3x3", "40"]):
        path = bfs_solve(tile8, inst.start, tile8.goal).states
        out = run_astar(tile8, tile8_manhattan, inst.start, tile8.goal, AStarConfig(node_threshold=50))
        assert out.status == THRESHOLD and len(out.store) <= 50
        # the first non-closed state on the path is a frontier node at its optimal depth
        i = next(i for i, s in enumerate(path) if not (s in out.store and out.store[s].closed))
        node = out.store[path[i]]
        assert not node.closed and node.g == i


def test_figure1_full_astar(figure1):
    space = figure1.space
    out = run_astar(space, parse_heuristic(None, space), figure1.start, space.goal)
    assert out.solved and out.solution.cost == 9
    assert [it.bound for it in out.stats.iterations] == [6, 7, 8, 9]
    assert out.stats.generated_last_iteration == out.stats.iterations[-1].generated


def test_matches_oracle_on_8_puzzle_walks(tile8, tile8_manhattan):
    for inst in generate_instances("tile", 15, 11, ["3x3", "40"]):
        out = run_astar(tile8, tile8_manhattan, inst.start, tile8.goal)
        assert out.solution.cost == bfs_distance(tile8, inst.start, tile8.goal)
        assert validate_solution(tile8, out.solution, inst.start)


def test_bounds_prune():
    p = Pancake(5)
    h = parse_heuristic("zero", p)
    start = p.pack([5, 4, 3, 2, 1])
    assert run_astar(p, h, start, p.goal).solution.cost == 1
    far = p.pack([2, 1, 3, 4, 5])
    assert run_astar(p, h, far, p.goal, AStarConfig(cost_bound=0)).status == EXHAUSTED
    assert run_astar(p, h, far, Goal([p.goal_state]), AStarConfig(g_bound=1)).status == EXHAUSTED
    assert run_astar(p, h, far, p.goal, AStarConfig(g_bound=2)).solution.cost == 1


def test_config_validation():
    with pytest.raises(ValueError):
        AStarConfig(node_threshold=0)
    with pytest.raises(ValueError):
        AStarConfig(tie_break="fifo")
