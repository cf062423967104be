"""Shared abstractions for unit-cost state spaces.

States are canonical ``bytes`` encodings. Two states are the same state iff
their encodings are equal, so the encoding is used directly as a dict key by
every engine.

All edges cost 1, so a node's depth below the start and its ``g`` value are
the same number. The engines use ``g`` throughout.
"""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Optional

PackedState = bytes

INF = math.inf


class SearchError(Exception):
    pass


class EncodingError(SearchError, ValueError):
    """A byte string is not a legal state encoding for the space."""


class UnsolvableError(SearchError):
    pass


class ConsistencyError(SearchError, RuntimeError):
    """Internal bookkeeping contradicted itself (e.g. a reconstruction failed)."""


class BudgetExceeded(SearchError):
    """Raised by :class:`Budget` when a node or time limit is hit.

    ``stats`` is filled in by the outermost driver with the counts gathered
    just before termination.
    """

    def __init__(self, reason: str, stats: Optional["RunStats"] = None):
        super().__init__(reason)
        self.reason = reason
        self.stats = stats


class GraphClass(enum.Enum):
    UNDIRECTED_INVERTIBLE = "undirected"
    DIRECTED = "directed"

    @property
    def layers(self) -> int:
        # live BFHS layers needed for duplicate detection
        return 2 if self is GraphClass.UNDIRECTED_INVERTIBLE else 3


class AncestorKind(enum.Enum):
    NONE = "none"
    PARENT = "parent"
    FRONTIER = "frontier"
    RELAY = "relay"


@dataclass(frozen=True)
class AncestorRef:
    kind: AncestorKind = AncestorKind.NONE
    ref: Optional[PackedState] = None


NO_ANCESTOR = AncestorRef()


class SearchNode:
    """A state with its path cost, heuristic estimate and parent link.

    Used by A*; ``parent`` is the parent's state (node ids are states).
    """

    __slots__ = ("state", "g", "h", "parent", "closed")

    def __init__(self, state: PackedState, g: int, h, parent: Optional[PackedState] = None):
        self.state = state
        self.g = g
        self.h = h
        self.parent = parent
        self.closed = False

    @property
    def f(self):
        return self.g + self.h

    @property
    def ancestor(self) -> AncestorRef:
        if self.parent is None:
            return NO_ANCESTOR
        return AncestorRef(AncestorKind.PARENT, self.parent)

    def __repr__(self):
        return f"SearchNode(g={self.g}, h={self.h}, f={self.f}, state={self.state!r})"


class Goal:
    """Goal test: membership in an explicit state set, or a predicate."""

    def __init__(self, states: Iterable[PackedState] = (), predicate: Optional[Callable[[PackedState], bool]] = None):
        self.states = frozenset(states)
        self.predicate = predicate
        if predicate is None:
            self.test = self.states.__contains__
        elif not self.states:
            self.test = predicate
        else:
            members = self.states
            self.test = lambda s: s in members or predicate(s)

    def __call__(self, state: PackedState) -> bool:
        return self.test(state)

    def __repr__(self):
        if self.predicate is not None:
            return f"Goal(predicate={self.predicate!r})"
        return f"Goal({len(self.states)} states)"


def goal_test_membership(goal: Goal, state: PackedState) -> bool:
    return goal.test(state)


class StateSpace:
    """Base class for unit-cost domains.

    Subclasses set ``name``, ``graph_class``, ``num_operators`` and ``goal``,
    and implement :meth:`successors`, :meth:`check_state`, :meth:`pack`,
    :meth:`unpack`. Successor order is part of a domain's contract: engines
    count nodes exactly, so it must never depend on hashing or set order.
    """

    name = "abstract"
    graph_class = GraphClass.DIRECTED
    num_operators = 0
    goal: Goal

    def successors(self, state: PackedState) -> list[tuple[PackedState, int]]:
        raise NotImplementedError

    def inverse_operator(self, op: int) -> Optional[int]:
        self.check_operator(op)
        return None

    def check_operator(self, op: int) -> None:
        if not isinstance(op, int) or not 0 <= op < self.num_operators:
            raise ValueError(f"unknown operator id {op!r} for {self.name}")

    def operator_name(self, op: int) -> str:
        return str(op)

    def check_state(self, state: PackedState) -> None:
        raise NotImplementedError

    def pack(self, obj) -> PackedState:
        raise NotImplementedError

    def unpack(self, state: PackedState):
        raise NotImplementedError

    def format_state(self, state: PackedState) -> str:
        return repr(self.unpack(state))

    @property
    def domain_id(self) -> str:
        """Identifies the space (including its goal) for PDB cache files."""
        return self.name

    def abstraction(self, pattern):
        raise NotImplementedError(f"{self.name} has no pattern abstraction")


def successors(space: StateSpace, state: PackedState) -> list[tuple[PackedState, int]]:
    space.check_state(state)
    return space.successors(state)


def inverse_operator(space: StateSpace, op: int) -> Optional[int]:
    return space.inverse_operator(op)


@dataclass
class Solution:
    cost: int
    states: list[PackedState]

    def __len__(self):
        return len(self.states)


class Validation(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def validate_solution(space: StateSpace, sol: Solution, start: Optional[PackedState] = None,
                      goal: Optional[Goal] = None) -> Validation:
    goal = goal or space.goal
    if not sol.states:
        return Validation(False, "empty path")
    if len(sol.states) != sol.cost + 1:
        return Validation(False, f"cost {sol.cost} but {len(sol.states)} states")
    if start is not None and sol.states[0] != start:
        return Validation(False, "path does not begin at the start state")
    for i, (s, t) in enumerate(zip(sol.states, sol.states[1:])):
        try:
            succ = space.successors(s) if i else successors(space, s)
        except EncodingError as exc:
            return Validation(False, f"step {i}: {exc}")
        if not any(c == t for c, _ in succ):
            return Validation(False, f"step {i}: no operator leads from state {i} to state {i + 1}")
    if not goal(sol.states[-1]):
        return Validation(False, "last state fails the goal test")
    return Validation(True)


@dataclass
class IterationStats:
    bound: float
    generated: int = 0
    expanded: int = 0
    peak_stored: int = 0


@dataclass
class RunStats:
    peak_stored: int = 0
    generated_prev_iterations: int = 0
    generated_last_iteration: int = 0
    generated_reconstruction: int = 0
    expansions: int = 0
    iterations: list[IterationStats] = field(default_factory=list)
    wall_time: float = 0.0
    solution_cost: Optional[int] = None
    heuristic_evaluations: int = 0

    @property
    def total_generated(self) -> int:
        return self.generated_prev_iterations + self.generated_last_iteration + self.generated_reconstruction

    def as_dict(self) -> dict:
        return {
            "peak_stored": self.peak_stored,
            "total_generated": self.total_generated,
            "generated_prev_iterations": self.generated_prev_iterations,
            "generated_last_iteration": self.generated_last_iteration,
            "generated_reconstruction": self.generated_reconstruction,
            "expansions": self.expansions,
            "heuristic_evaluations": self.heuristic_evaluations,
            "wall_time": self.wall_time,
            "solution_cost": self.solution_cost,
            "iterations": [
                {"bound": _json_num(it.bound), "generated": it.generated,
                 "expanded": it.expanded, "peak_stored": it.peak_stored}
                for it in self.iterations
            ],
        }


def _json_num(x):
    return None if x == INF else x


class Budget:
    """Node and wall-time limits shared by every engine in one run.

    Engines call :meth:`spend` once per expansion with the number of nodes
    just generated, so limits are honoured within one expansion step.
    """

    def __init__(self, max_nodes: Optional[int] = None, max_seconds: Optional[float] = None):
        if max_nodes is not None and max_nodes <= 0:
            raise ValueError("node budget must be positive")
        if max_seconds is not None and max_seconds <= 0:
            raise ValueError("time budget must be positive")
        self.max_nodes = max_nodes
        self.max_seconds = max_seconds
        self.used = 0
        self.started = time.perf_counter()

    def spend(self, generated: int) -> None:
        self.used += generated
        if self.max_nodes is not None and self.used > self.max_nodes:
            raise BudgetExceeded(f"node budget {self.max_nodes} exceeded")
        if self.max_seconds is not None and time.perf_counter() - self.started > self.max_seconds:
            raise BudgetExceeded(f"time budget {self.max_seconds}s exceeded")



@dataclass
class Abstraction:
    """A projection of a space onto a subset of its variables.

    ``space`` generates abstract successors, ``project`` maps a concrete state
    into it, ``index`` ranks an abstract state into ``range(size)`` and
    ``concrete_index`` is the fused ``index(project(s))`` used at lookup time.
    """

    space: StateSpace
    pattern: tuple
    size: int
    project: Callable[[PackedState], PackedState]
    index: Callable[[PackedState], int]
    concrete_index: Callable[[PackedState], int]


def rank_partial_permutation(positions, n: int) -> int:
    """Mixed-radix rank of distinct ``positions`` drawn from ``range(n)``.

    Radices are n, n-1, ..., n-k+1, so k variables give n!/(n-k)! dense ranks.
    """
    rank = 0
    radix = n
    seen = []
    for p in positions:
        digit = p - sum(1 for q in seen if q < p)
        rank = rank * radix + digit
        radix -= 1
        seen.append(p)
    return rank


SOLVED = "solved"
UNSOLVABLE = "unsolvable"
BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class SearchResult:
    """What a driver returns.

    ``relay``/``relay_depth`` are set by BFIDA*; ``origin``/``origin_g`` by
    the hybrid when its BFHS phase found the goal. ``call_log`` lists the
    hybrid's BFHS calls in order.
    """

    status: str
    stats: RunStats
    solution: Optional[Solution] = None
    algorithm: str = ""
    relay: Optional[PackedState] = None
    relay_depth: Optional[int] = None
    origin: Optional[PackedState] = None
    origin_g: Optional[int] = None
    call_log: list = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.status == SOLVED

    @property
    def cost(self) -> Optional[int]:
        return self.solution.cost if self.solution is not None else None
