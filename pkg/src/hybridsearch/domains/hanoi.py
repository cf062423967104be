"""Towers of Hanoi with four pegs.

Encoding: byte ``i`` is the peg (0-3) holding disc ``i``; disc 0 is the
smallest. Any assignment is a legal state because the stacking order on a
peg is implied by disc size.

Operator ``from*4 + to`` moves the top disc of ``from`` onto ``to``.
Successors are generated by ascending source peg, then ascending target peg.
"""
from __future__ import annotations

from ..space import Abstraction, EncodingError, Goal, GraphClass, StateSpace

PEGS = 4


class Hanoi4(StateSpace):
    graph_class = GraphClass.UNDIRECTED_INVERTIBLE
    num_operators = PEGS * PEGS

    def __init__(self, discs: int, goal=None):
        if discs < 1 or discs > 32:
            raise ValueError("disc count must be between 1 and 32")
        self.discs = discs
        self.name = f"hanoi4-{discs}"
        if goal is None:
            goal = bytes([PEGS - 1] * discs)
        self.check_state(goal)
        self.goal_state = goal
        self.goal = Goal([goal])

    def successors(self, state):
        top = [-1, -1, -1, -1]
        for disc, peg in enumerate(state):
            if top[peg] < 0:
                top[peg] = disc
        out = []
        for src in range(PEGS):
            disc = top[src]
            if disc < 0:
                continue
            for dst in range(PEGS):
                if dst != src and (top[dst] < 0 or top[dst] > disc):
                    b = bytearray(state)
                    b[disc] = dst
                    out.append((bytes(b), src * PEGS + dst))
        return out

    def inverse_operator(self, op):
        self.check_operator(op)
        src, dst = divmod(op, PEGS)
        if src == dst:
            raise ValueError(f"operator {op} moves a disc onto its own peg")
        return dst * PEGS + src

    def operator_name(self, op):
        src, dst = divmod(op, PEGS)
        return f"{src}->{dst}"

    def check_state(self, state):
        if not isinstance(state, bytes) or len(state) != self.discs:
            raise EncodingError(f"{self.name} state must be {self.discs} bytes")
        if any(p >= PEGS for p in state):
            raise EncodingError("peg index out of range")

    def pack(self, pegs) -> bytes:
        """Pack either a per-disc peg list or a list of four stacks (bottom to top, disc sizes 1..d)."""
        pegs = list(pegs)
        if len(pegs) == PEGS and all(isinstance(p, (list, tuple)) for p in pegs):
            return stacks_to_state(pegs, self.discs)
        state = bytes(pegs)
        self.check_state(state)
        return state

    def unpack(self, state):
        return state_to_stacks(state)

    @property
    def domain_id(self):
        return f"{self.name}-goal{self.goal_state.hex()}"

    def abstraction(self, pattern) -> Abstraction:
        """Keep only the listed discs (indices, 0 = smallest).

        Dropping a disc only removes constraints, and moves of dropped discs
        become self-loops, so abstract distances are admissible and consistent.
        """
        pattern = tuple(sorted(set(pattern)))
        for d in pattern:
            if not 0 <= d < self.discs:
                raise ValueError(f"disc {d} out of range")
        k = len(pattern)

        def project(state):
            return bytes(state[d] for d in pattern)

        def index(abstract):
            i = 0
            for p in abstract:
                i = i * PEGS + p
            return i

        def concrete_index(state):
            i = 0
            for d in pattern:
                i = i * PEGS + state[d]
            return i

        if k:
            space = Hanoi4(k, project(self.goal_state))
        else:
            space = _EmptyHanoi()
        return Abstraction(space, pattern, PEGS ** k, project, index, concrete_index)


class _EmptyHanoi(StateSpace):
    graph_class = GraphClass.UNDIRECTED_INVERTIBLE
    name = "hanoi4-0"

    def __init__(self):
        self.goal = Goal([b""])

    def successors(self, state):
        return []

    def check_state(self, state):
        if state != b"":
            raise EncodingError("empty abstraction has one state")


def stacks_to_state(stacks, discs: int) -> bytes:
    """Stacks list disc sizes 1..discs bottom to top; sizes must strictly decrease upward."""
    pegs = [None] * discs
    for peg, stack in enumerate(stacks):
        for lower, upper in zip(stack, stack[1:]):
            if upper >= lower:
                raise ValueError(f"disc {upper} placed on smaller disc {lower} on peg {peg}")
        for size in stack:
            if not 1 <= size <= discs:
                raise ValueError(f"disc size {size} out of range 1..{discs}")
            if pegs[size - 1] is not None:
                raise ValueError(f"disc {size} appears twice")
            pegs[size - 1] = peg
    if None in pegs:
        missing = [i + 1 for i, p in enumerate(pegs) if p is None]
        raise ValueError(f"discs {missing} not placed")
    return bytes(pegs)


def state_to_stacks(state) -> list[list[int]]:
    stacks = [[] for _ in range(PEGS)]
    for disc in range(len(state) - 1, -1, -1):
        stacks[state[disc]].append(disc + 1)
    return stacks
