"""Admissible, consistent heuristics.

Every heuristic is a callable ``h(state) -> int`` (``INF`` for states proven
unable to reach the goal). Pattern databases are filled by a backward
breadth-first search over an abstract space and stored as dense arrays of
unsigned 16-bit distances.
"""
from __future__ import annotations

import json
import logging
import os
import sys
import time
from array import array
from collections import deque
from pathlib import Path
from typing import Optional, Sequence

from .space import INF, GraphClass, PackedState, StateSpace

log = logging.getLogger(__name__)

UNREACHABLE = 0xFFFF
DEFAULT_ENTRY_BUDGET = 10 ** 8
PDB_CACHE_ENV = "HYBRIDSEARCH_PDB_CACHE"
_MAGIC = b"HSPDB1\n"


class PdbBudgetError(MemoryError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"pattern database needs {required} entries, budget is {budget}")
        self.required = required
        self.budget = budget


class InconsistentHeuristicError(ValueError):
    pass


class Heuristic:
    kind = "abstract"

    def __call__(self, state: PackedState):
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind


class Zero(Heuristic):
    kind = "zero"

    def __call__(self, state):
        return 0


class Manhattan(Heuristic):
    """Sum of tile distances to their home cells (sliding-tile only)."""

    kind = "manhattan"

    def __init__(self, space):
        if not hasattr(space, "manhattan_rows"):
            raise ValueError(f"Manhattan distance is undefined for {space.name}")
        self._rows = space.manhattan_rows()

    def __call__(self, state):
        return sum([row[t] for row, t in zip(self._rows, state)])


class TableHeuristic(Heuristic):
    """Explicit per-state values, e.g. the h= annotations of a graph file."""

    kind = "table"

    def __init__(self, table: dict):
        self.table = table

    def __call__(self, state):
        return self.table[state]


class MaxOf(Heuristic):
    kind = "max"

    def __init__(self, parts: Sequence[Heuristic]):
        if not parts:
            raise ValueError("MaxOf needs at least one component")
        self.parts = tuple(parts)

    def __call__(self, state):
        return max([h(state) for h in self.parts])

    def describe(self):
        return "max(" + ",".join(p.describe() for p in self.parts) + ")"


class PatternDatabase(Heuristic):
    kind = "pdb"

    def __init__(self, abstraction, table: array, domain_id: str = ""):
        if len(table) != abstraction.size:
            raise ValueError("table size does not match the abstraction")
        self.abstraction = abstraction
        self.pattern = abstraction.pattern
        self.table = table
        self.domain_id = domain_id
        self._index = abstraction.concrete_index
        self.build_seconds = 0.0

    def __call__(self, state):
        d = self.table[self._index(state)]
        return INF if d == UNREACHABLE else d

    def lookup_abstract(self, abstract_state):
        d = self.table[self.abstraction.index(abstract_state)]
        return INF if d == UNREACHABLE else d

    def describe(self):
        return "pdb:" + ",".join(str(p) for p in self.pattern)

    def save(self, path) -> None:
        header = {"domain": self.domain_id, "pattern": list(self.pattern), "entries": len(self.table)}
        data = self.table
        if sys.byteorder != "little":
            data = array("H", data)
            data.byteswap()
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
            data.tofile(fh)

    @classmethod
    def load(cls, path, space: StateSpace, pattern) -> "PatternDatabase":
        abstraction = space.abstraction(pattern)
        expected = {"domain": space.domain_id, "pattern": list(abstraction.pattern), "entries": abstraction.size}
        with open(path, "rb") as fh:
            if fh.readline() != _MAGIC:
                raise ValueError(f"{path}: not a pattern database file")
            header = json.loads(fh.readline())
            if header != expected:
                raise ValueError(f"{path}: header {header} does not match {expected}")
            table = array("H")
            table.fromfile(fh, abstraction.size)
            if fh.read(1):
                raise ValueError(f"{path}: trailing data")
        if sys.byteorder != "little":
            table.byteswap()
        return cls(abstraction, table, space.domain_id)


def build_pdb(space: StateSpace, pattern, entry_budget: int = DEFAULT_ENTRY_BUDGET) -> PatternDatabase:
    """Backward breadth-first search from the abstract goal."""
    if space.graph_class is not GraphClass.UNDIRECTED_INVERTIBLE:
        raise ValueError("pattern databases need invertible operators to search backwards")
    abstraction = space.abstraction(pattern)
    if abstraction.size > entry_budget:
        raise PdbBudgetError(abstraction.size, entry_budget)
    log.debug("building %d-entry PDB for %s pattern %s", abstraction.size, space.name, abstraction.pattern)
    started = time.perf_counter()
    table = array("H", [UNREACHABLE]) * abstraction.size
    index = abstraction.index
    succ = abstraction.space.successors
    queue = deque()
    for g in abstraction.space.goal.states:
        i = index(g)
        if table[i] == UNREACHABLE:
            table[i] = 0
            queue.append(g)
    # undirected: predecessors are successors
    while queue:
        s = queue.popleft()
        d = table[index(s)] + 1
        if d >= UNREACHABLE:
            raise OverflowError("abstract distance does not fit in 16 bits")
        for t, _ in succ(s):
            j = index(t)
            if table[j] == UNREACHABLE:
                table[j] = d
                queue.append(t)
    pdb = PatternDatabase(abstraction, table, space.domain_id)
    pdb.build_seconds = time.perf_counter() - started
    return pdb


def _cache_path(cache_dir, space, pattern):
    stem = space.domain_id + "__" + "-".join(str(p) for p in sorted(set(pattern)))
    return Path(cache_dir) / (stem.replace("/", "_") + ".pdb")


def cached_pdb(space: StateSpace, pattern, cache_dir: Optional[str] = None,
               entry_budget: int = DEFAULT_ENTRY_BUDGET) -> PatternDatabase:
    """Build a PDB, reusing a cache file when ``cache_dir`` (or the env var) is set."""
    cache_dir = cache_dir or os.environ.get(PDB_CACHE_ENV)
    if not cache_dir:
        return build_pdb(space, pattern, entry_budget)
    path = _cache_path(cache_dir, space, pattern)
    if path.exists():
        try:
            return PatternDatabase.load(path, space, pattern)
        except ValueError as exc:
            log.warning("ignoring stale PDB cache %s: %s", path, exc)
    pdb = build_pdb(space, pattern, entry_budget)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(f".tmp{os.getpid()}")
    pdb.save(tmp)
    os.replace(tmp, path)
    return pdb


def evaluate(h: Heuristic, state: PackedState):
    return h(state)


def check_consistency(space, h, states) -> None:
    """Reject ``h`` if some edge out of ``states`` violates h(s) <= 1 + h(t), or a goal has h > 0."""
    for s in states:
        hs = h(s)
        if space.goal(s) and hs != 0:
            raise InconsistentHeuristicError(f"goal state {space.format_state(s)} has h={hs}")
        for t, _ in space.successors(s):
            if hs > 1 + h(t):
                raise InconsistentHeuristicError(
                    f"h drops by more than the edge cost from {space.format_state(s)} to {space.format_state(t)}")


def default_heuristic_spec(space: StateSpace) -> str:
    name = type(space).__name__
    if name == "SlidingTile":
        return "manhattan"
    if name == "Hanoi4":
        # the largest discs carry most of the distance
        k = min(space.discs, 8)
        return "pdb:" + ",".join(str(d) for d in range(space.discs - k, space.discs))
    if name == "Pancake":
        k = min(space.n, 5)
        return "pdb:" + ",".join(str(p) for p in range(space.n - k + 1, space.n + 1))
    if name == "ExplicitGraph":
        return "table"
    return "zero"


def parse_heuristic(spec: Optional[str], space: StateSpace, cache_dir: Optional[str] = None,
                    entry_budget: int = DEFAULT_ENTRY_BUDGET) -> Heuristic:
    """Build a heuristic from a spec string.

    Components are ``zero``, ``manhattan``, ``table`` (explicit graphs) and
    ``pdb:<v1>,<v2>,...``; several components separated by ``;`` are
    combined with :class:`MaxOf`. ``None`` or ``default`` picks a per-domain
    default.
    """
    if spec is None or spec == "default":
        spec = default_heuristic_spec(space)
    parts = []
    for comp in spec.split(";"):
        comp = comp.strip()
        if comp == "zero":
            parts.append(Zero())
        elif comp == "manhattan":
            parts.append(Manhattan(space))
        elif comp == "table":
            table = getattr(space, "h_table", None)
            if table is None:
                raise ValueError(f"{space.name} carries no explicit heuristic table")
            h = TableHeuristic(table)
            check_consistency(space, h, table)
            parts.append(h)
        elif comp.startswith("pdb:") or comp == "pdb":
            body = comp[4:]
            pattern = [int(x) for x in body.split(",") if x.strip()] if body else []
            parts.append(cached_pdb(space, pattern, cache_dir, entry_budget))
        else:
            raise ValueError(f"unknown heuristic component {comp!r}")
    return parts[0] if len(parts) == 1 else MaxOf(parts)
