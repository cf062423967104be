"""Sliding-tile puzzles of any rectangular size.

Encoding: byte ``i`` is the tile in cell ``i`` (row-major), 0 is the blank.
The goal has the blank in cell 0 followed by tiles 1..n-1.

Operators move the blank: 0 up, 1 down, 2 left, 3 right, generated in that
order.
"""
from __future__ import annotations

from typing import Optional

from ..space import (Abstraction, EncodingError, Goal, GraphClass, StateSpace,
                     rank_partial_permutation)

UP, DOWN, LEFT, RIGHT = range(4)
OPERATOR_NAMES = ("up", "down", "left", "right")
_INVERSE = (DOWN, UP, RIGHT, LEFT)
WILDCARD = 255


def _neighbour_table(width, height):
    moves = []
    for z in range(width * height):
        r, c = divmod(z, width)
        row = []
        if r > 0:
            row.append((UP, z - width))
        if r < height - 1:
            row.append((DOWN, z + width))
        if c > 0:
            row.append((LEFT, z - 1))
        if c < width - 1:
            row.append((RIGHT, z + 1))
        moves.append(tuple(row))
    return tuple(moves)


class SlidingTile(StateSpace):
    graph_class = GraphClass.UNDIRECTED_INVERTIBLE
    num_operators = 4

    def __init__(self, width: int, height: int):
        if width < 2 or height < 2 or width * height > 64:
            raise ValueError(f"unsupported board size {width}x{height}")
        self.width = width
        self.height = height
        self.cells = width * height
        self.name = f"tile-{width}x{height}"
        self.goal_state = bytes(range(self.cells))
        self.goal = Goal([self.goal_state])
        self._moves = _neighbour_table(width, height)

    def successors(self, state):
        z = state.index(0)
        out = []
        for op, t in self._moves[z]:
            b = bytearray(state)
            b[z] = b[t]
            b[t] = 0
            out.append((bytes(b), op))
        return out

    def inverse_operator(self, op):
        self.check_operator(op)
        return _INVERSE[op]

    def operator_name(self, op):
        return OPERATOR_NAMES[op]

    def check_state(self, state):
        if not isinstance(state, bytes) or len(state) != self.cells:
            raise EncodingError(f"{self.name} state must be {self.cells} bytes")
        if sorted(state) != list(range(self.cells)):
            raise EncodingError(f"{self.name} state is not a permutation of 0..{self.cells - 1}")

    def pack(self, tiles) -> bytes:
        state = bytes(tiles)
        self.check_state(state)
        return state

    def unpack(self, state):
        return tuple(state)

    def format_state(self, state):
        return " ".join(str(t) for t in state)

    def is_solvable(self, state) -> bool:
        """Parity test against the goal (blank in cell 0)."""
        tiles = [t for t in state if t]
        inversions = sum(1 for i in range(len(tiles)) for j in range(i + 1, len(tiles)) if tiles[i] > tiles[j])
        if self.width % 2:
            return inversions % 2 == 0
        blank_row = state.index(0) // self.width
        return (inversions + blank_row) % 2 == 0

    def manhattan_rows(self):
        """Per-cell lookup rows: ``rows[cell][tile]`` = distance to the tile's home."""
        w = self.width
        rows = []
        for cell in range(self.cells):
            r, c = divmod(cell, w)
            row = [0] * 256
            for tile in range(1, self.cells):
                gr, gc = divmod(tile, w)
                row[tile] = abs(r - gr) + abs(c - gc)
            rows.append(bytes(row))
        return rows

    def abstraction(self, pattern) -> Abstraction:
        """Keep the listed tiles (0 = blank); the others become indistinguishable.

        Without the blank, a pattern tile may step into any neighbouring cell
        not held by another pattern tile.
        """
        pattern = tuple(sorted(set(pattern)))
        for t in pattern:
            if not 0 <= t < self.cells:
                raise ValueError(f"tile {t} not on a {self.width}x{self.height} board")
        keep = bytes(t if t in pattern else WILDCARD for t in range(256))
        n = self.cells
        order = pattern  # blank first when present (0 sorts first)

        def project(state):
            return state.translate(keep)

        def index(abstract):
            return rank_partial_permutation([abstract.index(t) for t in order], n)

        def concrete_index(state):
            return rank_partial_permutation([state.index(t) for t in order], n)

        if 0 in pattern:
            space = _WildcardTile(self)
        else:
            space = _BlanklessTile(self, pattern)
        space.goal = Goal([project(self.goal_state)])
        size = 1
        for i in range(len(order)):
            size *= n - i
        return Abstraction(space, pattern, size, project, index, concrete_index)

    @property
    def domain_id(self):
        return self.name


class _WildcardTile(SlidingTile):
    def __init__(self, parent: SlidingTile):
        super().__init__(parent.width, parent.height)
        self.name = parent.name + "-abstract"

    def check_state(self, state):
        if len(state) != self.cells or state.count(0) != 1:
            raise EncodingError("abstract tile state needs exactly one blank")


class _BlanklessTile(StateSpace):
    graph_class = GraphClass.UNDIRECTED_INVERTIBLE

    def __init__(self, parent: SlidingTile, pattern):
        self.name = parent.name + "-blankless"
        self.cells = parent.cells
        self.pattern = pattern
        self.num_operators = parent.cells * 4
        self._moves = _neighbour_table(parent.width, parent.height)

    def successors(self, state):
        out = []
        for t in self.pattern:
            z = state.index(t)
            for op, c in self._moves[z]:
                if state[c] == WILDCARD:
                    b = bytearray(state)
                    b[c] = t
                    b[z] = WILDCARD
                    out.append((bytes(b), z * 4 + op))
        return out

    def inverse_operator(self, op: int) -> Optional[int]:
        self.check_operator(op)
        cell, d = divmod(op, 4)
        target = self._moves[cell]
        for o, c in target:
            if o == d:
                return c * 4 + _INVERSE[d]
        raise ValueError(f"operator {op} leaves the board")

    def check_state(self, state):
        if len(state) != self.cells:
            raise EncodingError("bad abstract tile state")
