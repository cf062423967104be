"""Uninformed breadth-first search, the reference every engine is checked against."""
from __future__ import annotations

from collections import deque
from typing import Callable, Optional

from .space import PackedState, Solution, StateSpace


class OracleLimitError(RuntimeError):
    pass


def bfs_solve(space: StateSpace, start: PackedState, goal_test: Callable[[PackedState], bool],
              max_states: Optional[int] = None) -> Optional[Solution]:
    """Shortest path from ``start`` to any goal, or None if none is reachable."""
    if goal_test(start):
        return Solution(0, [start])
    parent = {start: None}
    frontier = deque([start])
    succ = space.successors
    while frontier:
        s = frontier.popleft()
        for t, _ in succ(s):
            if t in parent:
                continue
            parent[t] = s
            if goal_test(t):
                path = [t]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return Solution(len(path) - 1, path)
            if max_states is not None and len(parent) > max_states:
                raise OracleLimitError(f"BFS oracle visited more than {max_states} states")
            frontier.append(t)
    return None


def bfs_distance(space, start, goal_test, max_states=None) -> Optional[int]:
    sol = bfs_solve(space, start, goal_test, max_states)
    return None if sol is None else sol.cost


def bfs_distances(space: StateSpace, source: PackedState, max_states: Optional[int] = None) -> dict:
    """Distance from ``source`` to every reachable state.

    On undirected spaces this is also the distance *to* ``source``.
    """
    dist = {source: 0}
    frontier = deque([source])
    succ = space.successors
    while frontier:
        s = frontier.popleft()
        d = dist[s] + 1
        for t, _ in succ(s):
            if t not in dist:
                dist[t] = d
                if max_states is not None and len(dist) > max_states:
                    raise OracleLimitError(f"BFS oracle visited more than {max_states} states")
                frontier.append(t)
    return dist
