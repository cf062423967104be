"""Line-oriented instance files.

Canonical forms (``serialize_instance`` emits exactly these)::

    domain: tile
    size: 3x3
    start: 1 2 3 4 5 6 7 8 0

    domain: hanoi4
    discs=3 start=0 goal=3

    domain: pancake
    n: 5
    start: 3 1 2 5 4

    domain: graph
    vertex S h=6
    edge S A
    start S
    goal Z

Hanoi ``start``/``goal`` are either a single peg or four ``/``-separated
stacks of disc sizes listed bottom to top, e.g. ``start=3,1/2//``. Blank
lines and ``#`` comments are accepted on input but not preserved.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..space import EncodingError, PackedState, StateSpace
from .graph import ExplicitGraph, ExplicitGraphInstance, figure1_space
from .hanoi import PEGS, Hanoi4, state_to_stacks, stacks_to_state
from .pancake import Pancake
from .tile import SlidingTile


class InstanceSyntaxError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.message = message
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)


@dataclass
class Instance:
    domain: str
    space: StateSpace
    start: PackedState
    name: str = ""

    @property
    def goal(self):
        return self.space.goal


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_instance(text: str, domain: Optional[str] = None, source: Optional[str] = None) -> Instance:
    lines = list(_lines(text))
    if not lines:
        raise InstanceSyntaxError("empty instance", None, source)
    no, first = lines[0]
    m = re.fullmatch(r"domain:\s*(\S+)", first)
    if not m:
        raise InstanceSyntaxError("expected 'domain: <tile|hanoi4|pancake|graph>' header", no, source)
    declared = m.group(1)
    if domain is not None and domain != declared:
        raise InstanceSyntaxError(f"file declares domain {declared!r}, expected {domain!r}", no, source)
    parser = _PARSERS.get(declared)
    if parser is None:
        raise InstanceSyntaxError(f"unknown domain {declared!r}", no, source)
    body = lines[1:]
    try:
        inst = parser(body, no)
    except InstanceSyntaxError as exc:
        raise InstanceSyntaxError(exc.message, exc.line, source) from None
    inst.name = Path(source).stem if source else inst.space.name
    return inst


def _fields(body, header_line, keys):
    values = {}
    for no, line in body:
        m = re.fullmatch(r"(\w+):\s*(.*)", line)
        if not m or m.group(1) not in keys:
            raise InstanceSyntaxError(f"unexpected line {line!r}", no)
        if m.group(1) in values:
            raise InstanceSyntaxError(f"duplicate field {m.group(1)!r}", no)
        values[m.group(1)] = (no, m.group(2).strip())
    for k in keys:
        if k not in values:
            raise InstanceSyntaxError(f"missing field {k!r}", header_line)
    return values


def _ints(value, no):
    try:
        return [int(tok) for tok in value.split()]
    except ValueError:
        raise InstanceSyntaxError(f"expected integers, got {value!r}", no) from None


def _parse_tile(body, header_line):
    f = _fields(body, header_line, ("size", "start"))
    no, size = f["size"]
    m = re.fullmatch(r"(\d+)x(\d+)", size)
    if not m:
        raise InstanceSyntaxError(f"size must look like 3x3, got {size!r}", no)
    w, h = int(m.group(1)), int(m.group(2))
    try:
        space = SlidingTile(w, h)
    except ValueError as exc:
        raise InstanceSyntaxError(str(exc), no) from None
    no, start = f["start"]
    tiles = _ints(start, no)
    try:
        state = space.pack(tiles)
    except (EncodingError, ValueError) as exc:
        raise InstanceSyntaxError(str(exc), no) from None
    if not space.is_solvable(state):
        raise InstanceSyntaxError("start permutation has the wrong parity and cannot reach the goal", no)
    return Instance("tile", space, state)


def _hanoi_assignment(value, discs, no):
    if re.fullmatch(r"\d+", value):
        peg = int(value)
        if peg >= PEGS:
            raise InstanceSyntaxError(f"peg {peg} out of range 0..3", no)
        return bytes([peg] * discs)
    parts = value.split("/")
    if len(parts) != PEGS:
        raise InstanceSyntaxError(f"expected a peg number or four '/'-separated stacks, got {value!r}", no)
    stacks = []
    for part in parts:
        try:
            stacks.append([int(x) for x in part.split(",")] if part else [])
        except ValueError:
            raise InstanceSyntaxError(f"bad stack {part!r}", no) from None
    try:
        return stacks_to_state(stacks, discs)
    except ValueError as exc:
        raise InstanceSyntaxError(f"invalid Hanoi configuration: {exc}", no) from None


def _parse_hanoi(body, header_line):
    if len(body) != 1:
        raise InstanceSyntaxError("expected one line 'discs=<d> start=<spec> goal=<spec>'",
                                  body[1][0] if len(body) > 1 else header_line)
    no, line = body[0]
    m = re.fullmatch(r"discs=(\d+)\s+start=(\S+)\s+goal=(\S+)", line)
    if not m:
        raise InstanceSyntaxError("expected 'discs=<d> start=<spec> goal=<spec>'", no)
    discs = int(m.group(1))
    if discs < 1:
        raise InstanceSyntaxError("need at least one disc", no)
    start = _hanoi_assignment(m.group(2), discs, no)
    goal = _hanoi_assignment(m.group(3), discs, no)
    return Instance("hanoi4", Hanoi4(discs, goal), start)


def _parse_pancake(body, header_line):
    f = _fields(body, header_line, ("n", "start"))
    no, n = f["n"]
    if not n.isdigit() or int(n) < 2:
        raise InstanceSyntaxError(f"n must be an integer >= 2, got {n!r}", no)
    space = Pancake(int(n))
    no, start = f["start"]
    try:
        state = space.pack(_ints(start, no))
    except (EncodingError, ValueError) as exc:
        raise InstanceSyntaxError(str(exc), no) from None
    return Instance("pancake", space, state)


def _parse_graph(body, header_line):
    vertices, h, edges, goals = [], {}, [], []
    start = None
    for no, line in body:
        toks = line.split()
        kind = toks[0]
        if kind == "vertex" and len(toks) == 3 and re.fullmatch(r"h=\d+", toks[2]):
            if toks[1] in h:
                raise InstanceSyntaxError(f"vertex {toks[1]!r} declared twice", no)
            vertices.append(toks[1])
            h[toks[1]] = int(toks[2][2:])
        elif kind == "edge" and len(toks) == 3:
            for v in toks[1:]:
                if v not in h:
                    raise InstanceSyntaxError(f"edge references undeclared vertex {v!r}", no)
            edges.append((toks[1], toks[2]))
        elif kind == "start" and len(toks) == 2:
            if start is not None:
                raise InstanceSyntaxError("start declared twice", no)
            start = toks[1]
        elif kind == "goal" and len(toks) == 2:
            goals.append(toks[1])
        else:
            raise InstanceSyntaxError(f"unexpected line {line!r}", no)
    if start is None:
        raise InstanceSyntaxError("missing 'start' line", header_line)
    inst = ExplicitGraphInstance(vertices, h, edges, start, goals)
    try:
        space = ExplicitGraph(inst)
    except ValueError as exc:
        raise InstanceSyntaxError(str(exc), header_line) from None
    return Instance("graph", space, space.start)


_PARSERS = {
    "tile": _parse_tile,
    "hanoi4": _parse_hanoi,
    "pancake": _parse_pancake,
    "graph": _parse_graph,
}


def _hanoi_spec(state):
    if len(set(state)) == 1:
        return str(state[0])
    return "/".join(",".join(str(d) for d in stack) for stack in state_to_stacks(state))


def serialize_instance(inst: Instance) -> str:
    space = inst.space
    if inst.domain == "tile":
        return (f"domain: tile\nsize: {space.width}x{space.height}\n"
                f"start: {' '.join(str(t) for t in inst.start)}\n")
    if inst.domain == "hanoi4":
        return (f"domain: hanoi4\ndiscs={space.discs} start={_hanoi_spec(inst.start)} "
                f"goal={_hanoi_spec(space.goal_state)}\n")
    if inst.domain == "pancake":
        return f"domain: pancake\nn: {space.n}\nstart: {' '.join(str(p) for p in inst.start)}\n"
    if inst.domain == "graph":
        g = space.instance
        out = ["domain: graph"]
        out += [f"vertex {v} h={g.h[v]}" for v in g.vertices]
        out += [f"edge {a} {b}" for a, b in g.edges]
        out.append(f"start {space.unpack(inst.start)}")
        out += [f"goal {v}" for v in g.goals]
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown domain {inst.domain!r}")


def load_instance(path, domain: Optional[str] = None) -> Instance:
    """Read an instance file, or a built-in id of the form ``builtin:<name>``."""
    path = str(path)
    if path.startswith("builtin:"):
        inst = builtin_instance(path.split(":", 1)[1])
        if domain is not None and domain != inst.domain:
            raise InstanceSyntaxError(f"built-in {path!r} is a {inst.domain} instance, not {domain}")
        return inst
    text = Path(path).read_text()
    return parse_instance(text, domain, source=path)


def builtin_instance(name: str) -> Instance:
    if name == "figure1":
        space = ExplicitGraph(figure1_space())
        return Instance("graph", space, space.start, "figure1")
    raise InstanceSyntaxError(f"unknown built-in instance {name!r}")
