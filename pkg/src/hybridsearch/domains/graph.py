"""Explicit directed unit-cost graphs with per-vertex heuristic values.

Vertices are encoded as 2-byte little-endian indices in declaration order.
Operator ``i`` is the i-th declared edge; successors follow declaration
order. Edges have no declared inverses, so the graph is Directed.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

from ..space import EncodingError, Goal, GraphClass, StateSpace

_PACK = struct.Struct("<H")


@dataclass
class ExplicitGraphInstance:
    vertices: list[str]
    h: dict[str, int]
    edges: list[tuple[str, str]]
    start: str
    goals: list[str]
    name: str = "graph"

    def validate(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise ValueError(f"vertex {v!r} declared twice")
            seen.add(v)
            hv = self.h.get(v)
            if not isinstance(hv, int) or hv < 0:
                raise ValueError(f"vertex {v!r} needs a nonnegative integer h")
        for a, b in self.edges:
            for v in (a, b):
                if v not in seen:
                    raise ValueError(f"edge {a}->{b} references undeclared vertex {v!r}")
        if self.start not in seen:
            raise ValueError(f"start vertex {self.start!r} not declared")
        for g in self.goals:
            if g not in seen:
                raise ValueError(f"goal vertex {g!r} not declared")


class ExplicitGraph(StateSpace):
    graph_class = GraphClass.DIRECTED

    def __init__(self, instance: ExplicitGraphInstance):
        instance.validate()
        self.instance = instance
        self.name = instance.name
        self.index = {v: i for i, v in enumerate(instance.vertices)}
        self.num_operators = len(instance.edges)
        self._succ = [[] for _ in instance.vertices]
        for op, (a, b) in enumerate(instance.edges):
            self._succ[self.index[a]].append((_PACK.pack(self.index[b]), op))
        self.goal = Goal(self.pack(g) for g in instance.goals)
        self.h_table = {self.pack(v): instance.h[v] for v in instance.vertices}

    def successors(self, state):
        return list(self._succ[_PACK.unpack(state)[0]])

    def check_state(self, state):
        if not isinstance(state, bytes) or len(state) != 2:
            raise EncodingError("graph state must be 2 bytes")
        if _PACK.unpack(state)[0] >= len(self.instance.vertices):
            raise EncodingError("vertex index out of range")

    def pack(self, name) -> bytes:
        try:
            return _PACK.pack(self.index[name])
        except KeyError:
            raise EncodingError(f"unknown vertex {name!r}") from None

    def unpack(self, state):
        return self.instance.vertices[_PACK.unpack(state)[0]]

    def format_state(self, state):
        return self.unpack(state)

    def operator_name(self, op):
        a, b = self.instance.edges[op]
        return f"{a}->{b}"

    @property
    def start(self) -> bytes:
        return self.pack(self.instance.start)


# Figure-1 example: the search tree whose A* phase (12 stored nodes) leaves
# S, A, C, D, G closed and B, E, F, H-K open. Everything below the depth-3
# nodes is this package's own extension:
#   H, I -> L and J, K -> M   (f = 9, so the bound-8 call on H-K fails with 9)
#   E, F -> N                 (f = 9, dead end)
#   B -> O                    (f = 10, dead end)
#   L -> L5 -> L6 -> L7 -> L8 -> Z  (goal at depth 9, all f = 9)
FIGURE1_THRESHOLD = 12

_FIGURE1_H = {
    "S": 6, "A": 6, "B": 7, "C": 6,
    "D": 5, "E": 6, "F": 6, "G": 5,
    "H": 5, "I": 5, "J": 5, "K": 5,
    "L": 5, "M": 5, "N": 6, "O": 8,
    "L5": 4, "L6": 3, "L7": 2, "L8": 1, "Z": 0,
}

_FIGURE1_EDGES = [
    ("S", "A"), ("S", "B"), ("S", "C"),
    ("A", "D"), ("A", "E"),
    ("D", "H"), ("D", "I"),
    ("C", "F"), ("C", "G"),
    ("G", "J"), ("G", "K"),
    ("H", "L"), ("I", "L"), ("J", "M"), ("K", "M"),
    ("E", "N"), ("F", "N"),
    ("B", "O"),
    ("L", "L5"), ("L5", "L6"), ("L6", "L7"), ("L7", "L8"), ("L8", "Z"),
]


def figure1_space() -> ExplicitGraphInstance:
    return ExplicitGraphInstance(
        vertices=list(_FIGURE1_H),
        h=dict(_FIGURE1_H),
        edges=list(_FIGURE1_EDGES),
        start="S",
        goals=["Z"],
        name="figure1",
    )
