"""Memory-bounded optimal search for unit-cost domains: A*, BFHS, BFIDA* and A*+BFHS."""
from .astar import AStarConfig, AStarOutcome, run_astar
from .bfhs import BfhsCall, BfhsOutcome, LayerStore, Seed, duplicate_check, run_bfhs
from .bfida import BfidaConfig, reconstruct_two_phase, run_bfida
from .heuristics import build_pdb, evaluate, parse_heuristic
from .hybrid import (FrontierSet, HybridConfig, partition_frontier, reconstruct_single,
                     run_hybrid, update_set_f)
from .space import (INF, Budget, BudgetExceeded, Goal, GraphClass, RunStats, SearchNode,
                    SearchResult, Solution, StateSpace, validate_solution)

__version__ = "0.1.0"
