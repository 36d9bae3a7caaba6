"""Cone-based topology control for multihop wireless networks.

Nodes grow their transmit power until every cone of angle ``alpha`` around
them holds a neighbor; optional passes then prune edges while keeping the
max-power graph's connectivity.
"""

from .geometry import coverage_equal, coverage_set, has_alpha_gap, max_gap
from .radio import RadioModel
from .network import EdgeSet, Label, Topology, connected_components, generate_random, max_power_graph
from .cbtc import CbtcResult, build_counter_5pi6, build_example1, run_cbtc
from .optimizations import Regime, optimize

__all__ = [
    "CbtcResult", "EdgeSet", "Label", "RadioModel", "Regime", "Topology",
    "build_counter_5pi6", "build_example1", "connected_components", "coverage_equal",
    "coverage_set", "generate_random", "has_alpha_gap", "max_gap", "max_power_graph",
    "optimize", "run_cbtc",
]
__version__ = "0.1.0"
