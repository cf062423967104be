"""Breadth-first heuristic search under a fixed cost bound.

One call expands depth layers in increasing order. Seeds may sit at several
depths; seeds at depth d join layer d before layer d-1 is expanded, so they
are queued after the shallower seeds. Generated nodes with f > bound are
pruned and the smallest pruned f is reported as ``next_f``.

Duplicate detection keeps one dict per layer:

* undirected (invertible) spaces keep layers {d, d+1} while expanding d, and
  each record carries a bitmask of operators leading back to its parents,
  which are never applied;
* directed spaces keep {d-1, d, d+1}.

An optional relay layer is kept for the rest of the call once reached;
nodes below it remember their ancestor in it. Each node also remembers the
seed it descends from. An optional external store (the A*-phase nodes of the
hybrid) prunes any node whose g is not strictly better than the stored one.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .space import INF, AncestorKind, AncestorRef, Budget, BudgetExceeded, PackedState, StateSpace


@dataclass
class Seed:
    state: PackedState
    g: int
    origin: Optional[PackedState] = None


@dataclass
class BfhsCall:
    bound: int
    seeds: list[Seed]
    layers: Optional[int] = None
    relay_depth: Optional[int] = None
    external_store: Optional[dict] = None


@dataclass
class BfhsStats:
    generated: int = 0
    expanded: int = 0
    peak_stored: int = 0
    peak_layers: int = 0
    heuristic_evaluations: int = 0
    wall_time: float = 0.0


@dataclass
class BfhsOutcome:
    solved: bool
    stats: BfhsStats = field(default_factory=BfhsStats)
    bound: int = 0
    next_f: float = INF
    cost: Optional[int] = None
    goal: Optional[PackedState] = None
    origin: Optional[PackedState] = None
    relay: Optional[PackedState] = None
    relay_depth: Optional[int] = None

    @property
    def origin_ref(self) -> AncestorRef:
        return AncestorRef(AncestorKind.FRONTIER, self.origin) if self.origin is not None else AncestorRef()

    @property
    def relay_ref(self) -> AncestorRef:
        return AncestorRef(AncestorKind.RELAY, self.relay) if self.relay is not None else AncestorRef()

    def signature(self):
        """Everything that defines the outcome apart from timing."""
        s = self.stats
        return (self.solved, self.bound, self.next_f, self.cost, self.goal, self.origin, self.relay,
                s.generated, s.expanded, s.peak_stored, s.peak_layers)


class RelayStateError(RuntimeError):
    pass


class LayerStore:
    """Per-depth dicts of ``state -> (origin, relay ancestor, back-operator mask)``."""

    def __init__(self, layers: int):
        if layers not in (2, 3):
            raise ValueError("a layer store keeps 2 or 3 live layers")
        self.width = layers
        self.layers: dict[int, dict] = {}
        self.expanding: Optional[int] = None
        self.relay_depth: Optional[int] = None
        self.relay: Optional[dict] = None

    def layer(self, depth: int) -> dict:
        lay = self.layers.get(depth)
        if lay is None:
            lay = self.layers[depth] = {}
        return lay

    def freeze_relay_layer(self, depth: int) -> None:
        """Keep layer ``depth`` for the rest of the call once it is reached."""
        if self.expanding is not None and depth <= self.expanding:
            raise RelayStateError(f"relay depth {depth} already passed (expanding {self.expanding})")
        self.relay_depth = depth

    def begin_expansion(self, depth: int) -> None:
        self.expanding = depth
        if depth == self.relay_depth:
            self.relay = self.layers.get(depth, {})

    def retire(self, depth: int) -> None:
        """Expansion of ``depth`` finished; drop layers that fall out of the window."""
        keep_from = depth + 1 if self.width == 2 else depth
        for d in [d for d in self.layers if d < keep_from]:
            del self.layers[d]

    def clear(self) -> None:
        self.layers.clear()

    def contains(self, state: PackedState, g: int) -> bool:
        """Lookup for a node generated at depth ``g`` within the live window or relay."""
        lo = g - self.width + 1
        for d in range(lo, g + 1):
            lay = self.layers.get(d)
            if lay is not None and state in lay:
                return True
        return self.relay is not None and state in self.relay

    def _relay_separate(self) -> bool:
        return self.relay is not None and self.layers.get(self.relay_depth) is not self.relay

    @property
    def resident_layers(self) -> int:
        return len(self.layers) + (1 if self._relay_separate() else 0)

    @property
    def stored(self) -> int:
        n = sum(len(lay) for lay in self.layers.values())
        if self._relay_separate():
            n += len(self.relay)
        return n


def duplicate_check(store: LayerStore, external_store, state: PackedState, g: int,
                    op: Optional[int] = None, parent_mask: int = 0) -> bool:
    """True when a node generated at depth ``g`` should be pruned as a duplicate.

    ``op`` and ``parent_mask`` are the generating operator and the parent's
    back-operator mask; a masked operator is pruned before any lookup.
    """
    if op is not None and (parent_mask >> op) & 1:
        return True
    if store.contains(state, g):
        return True
    if external_store is not None:
        old = external_store.get(state)
        if old is not None and _stored_g(old) <= g:
            return True
    return False


def _stored_g(entry):
    return entry if isinstance(entry, int) else entry.g


def run_bfhs(space: StateSpace, h, call: BfhsCall, goal_test: Callable[[PackedState], bool],
             budget: Optional[Budget] = None, on_expand=None, store: Optional[LayerStore] = None) -> BfhsOutcome:
    """Run one bounded breadth-first heuristic search.

    ``on_expand(state, depth, store)`` is called before each expansion
    (instrumentation only).
    """
    started = time.perf_counter()
    bound = call.bound
    width = call.layers or space.graph_class.layers
    undirected = width == 2
    if store is None:
        store = LayerStore(width)
    stats = BfhsStats()
    if call.relay_depth is not None:
        store.freeze_relay_layer(call.relay_depth)
    relay_depth = store.relay_depth

    back = [0] * space.num_operators
    if undirected:
        for op in range(space.num_operators):
            try:
                inv = space.inverse_operator(op)
            except ValueError:
                continue  # operator code the space never generates
            if inv is None:
                raise ValueError(f"{space.name} operator {op} has no inverse; use 3 layers")
            back[op] = 1 << inv

    if not call.seeds:
        raise ValueError("a BFHS call needs at least one seed")
    pending: dict[int, list[Seed]] = {}
    seen = set()
    evals = 0
    for seed in call.seeds:
        if seed.state in seen:
            raise ValueError(f"duplicate seed {space.format_state(seed.state)}")
        seen.add(seed.state)
        hs = h(seed.state)
        evals += 1
        if seed.g + hs > bound:
            raise ValueError(f"seed f={seed.g + hs} exceeds bound {bound}")
        pending.setdefault(seed.g, []).append(seed)
    stats.heuristic_evaluations = evals
    for g in sorted(pending):
        for seed in pending[g]:
            if goal_test(seed.state):
                stats.wall_time = time.perf_counter() - started
                return BfhsOutcome(True, stats, bound, INF, g, seed.state, seed.origin,
                                   seed.state if g == relay_depth else None,
                                   relay_depth if g == relay_depth else None)
    depths = sorted(pending)
    if relay_depth is not None and relay_depth < depths[0]:
        raise RelayStateError(f"relay depth {relay_depth} lies above the shallowest seed")

    ext = call.external_store
    succ = space.successors
    generated = expanded = 0
    next_f = INF
    peak = peak_layers = 0

    # A seed reached from a shallower seed is already in the search at a
    # smaller depth; injecting it again would re-expand its subtree after its
    # first layer has been dropped.
    later_seeds = {sd.state: sd.g for sd in call.seeds} if len(pending) > 1 else None
    reached_early = set()

    def inject(depth, layer, blockers):
        for seed in pending.pop(depth, ()):
            s = seed.state
            if s in reached_early or s in layer or any(s in b for b in blockers if b is not None):
                continue
            layer[s] = (seed.origin, None, 0)

    def solved(t, depth, origin, crel):
        stats.generated, stats.expanded = generated, expanded
        stats.peak_stored = max(peak, store.stored)
        stats.peak_layers = max(peak_layers, store.resident_layers)
        stats.heuristic_evaluations = evals
        stats.wall_time = time.perf_counter() - started
        return BfhsOutcome(True, stats, bound, INF, depth, t, origin, crel,
                           relay_depth if crel is not None else None)

    d = depths[0]
    cur = store.layer(d)
    inject(d, cur, ())
    prev = None
    try:
        while True:
            if not cur:
                deeper = [p for p in pending if p > d]
                if not deeper:
                    break
                store.clear()
                prev = None
                d = min(deeper)
                cur = store.layer(d)
                inject(d, cur, (store.relay,))
                continue
            g1 = d + 1
            nxt = store.layer(g1)
            relay_layer = store.relay
            inject(g1, nxt, (cur, prev, relay_layer))
            store.begin_expansion(d)
            is_relay = d == relay_depth
            relay_layer = store.relay if store.relay is not cur else None
            for s, (origin, relay, mask) in cur.items():
                if on_expand is not None:
                    on_expand(s, d, store)
                crel = s if is_relay else relay
                gen = 0
                for t, op in succ(s):
                    if (mask >> op) & 1:
                        continue
                    gen += 1
                    r = nxt.get(t)
                    if r is not None:
                        if undirected:
                            nxt[t] = (r[0], r[1], r[2] | back[op])
                        continue
                    if t in cur or (prev is not None and t in prev) or (relay_layer is not None and t in relay_layer):
                        continue
                    if ext is not None:
                        old = ext.get(t)
                        if old is not None and old.g <= g1:
                            continue
                    ht = h(t)
                    evals += 1
                    f = g1 + ht
                    if f > bound:
                        if f < next_f:
                            next_f = f
                        continue
                    nxt[t] = (origin, crel, back[op])
                    if later_seeds is not None and later_seeds.get(t, -1) > g1:
                        reached_early.add(t)
                    if goal_test(t):
                        generated += gen
                        expanded += 1
                        return solved(t, g1, origin, crel)
                generated += gen
                expanded += 1
                if budget is not None:
                    budget.spend(gen)
            stored = store.stored
            if stored > peak:
                peak = stored
            if store.resident_layers > peak_layers:
                peak_layers = store.resident_layers
            store.retire(d)
            prev = cur if not undirected else None
            cur = nxt
            d = g1
    except BudgetExceeded:
        stats.generated, stats.expanded = generated, expanded
        stats.peak_stored = max(peak, store.stored)
        raise

    stats.generated, stats.expanded = generated, expanded
    stats.peak_stored = peak
    stats.peak_layers = peak_layers
    stats.heuristic_evaluations = evals
    stats.wall_time = time.perf_counter() - started
    return BfhsOutcome(False, stats, bound, next_f)
