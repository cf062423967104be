from .graph import (FIGURE1_THRESHOLD, ExplicitGraph, ExplicitGraphInstance,
                    figure1_space)
from .hanoi import Hanoi4
from .instances import (Instance, InstanceSyntaxError, builtin_instance,
                        load_instance, parse_instance, serialize_instance)
from .pancake import Pancake
from .tile import SlidingTile

DOMAINS = ("tile", "hanoi4", "pancake", "graph")

__all__ = [
    "DOMAINS", "ExplicitGraph", "ExplicitGraphInstance", "FIGURE1_THRESHOLD",
    "Hanoi4", "Instance", "InstanceSyntaxError", "Pancake", "SlidingTile",
    "builtin_instance", "figure1_space", "load_instance", "parse_instance",
    "serialize_instance",
]
