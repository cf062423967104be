"""Pancake sorting: flip any prefix of length 2..n.

Encoding: the permutation of 1..n as bytes, top pancake first. Operator
``k - 2`` reverses the top ``k`` pancakes; each flip is its own inverse.
"""
from __future__ import annotations

from ..space import (Abstraction, EncodingError, Goal, GraphClass, StateSpace,
                     rank_partial_permutation)

WILDCARD = 255


class Pancake(StateSpace):
    graph_class = GraphClass.UNDIRECTED_INVERTIBLE

    def __init__(self, n: int):
        if n < 2 or n > 64:
            raise ValueError("pancake count must be between 2 and 64")
        self.n = n
        self.name = f"pancake-{n}"
        self.num_operators = n - 1
        self.goal_state = bytes(range(1, n + 1))
        self.goal = Goal([self.goal_state])

    def successors(self, state):
        return [(state[k - 1::-1] + state[k:], k - 2) for k in range(2, self.n + 1)]

    def inverse_operator(self, op):
        self.check_operator(op)
        return op

    def operator_name(self, op):
        return f"flip{op + 2}"

    def check_state(self, state):
        if not isinstance(state, bytes) or len(state) != self.n:
            raise EncodingError(f"{self.name} state must be {self.n} bytes")
        if sorted(state) != list(range(1, self.n + 1)):
            raise EncodingError(f"{self.name} state is not a permutation of 1..{self.n}")

    def pack(self, perm) -> bytes:
        state = bytes(perm)
        self.check_state(state)
        return state

    def unpack(self, state):
        return tuple(state)

    def format_state(self, state):
        return " ".join(str(p) for p in state)

    def abstraction(self, pattern) -> Abstraction:
        """Keep the listed pancakes; the rest become identical wildcards."""
        pattern = tuple(sorted(set(pattern)))
        for p in pattern:
            if not 1 <= p <= self.n:
                raise ValueError(f"pancake {p} out of range 1..{self.n}")
        keep = bytes(t if t in pattern else WILDCARD for t in range(256))
        n = self.n

        def project(state):
            return state.translate(keep)

        def index(abstract):
            return rank_partial_permutation([abstract.index(p) for p in pattern], n)

        def concrete_index(state):
            return rank_partial_permutation([state.index(p) for p in pattern], n)

        space = _WildcardPancake(n)
        space.goal = Goal([project(self.goal_state)])
        size = 1
        for i in range(len(pattern)):
            size *= n - i
        return Abstraction(space, pattern, size, project, index, concrete_index)


class _WildcardPancake(Pancake):
    def check_state(self, state):
        if len(state) != self.n:
            raise EncodingError("bad abstract pancake state")
