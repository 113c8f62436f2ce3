"""Bus-factor estimation on bipartite person/task graphs."""

__version__ = "0.1.0"

from .graph import (BipartiteGraph, RemovalMask, Threshold, build_graph, connected_components,
                    filter_by_weight, isolated_task_count, tau)
from .measures import (BusFactorReport, RobustnessCurve, analyze, gauss_area, mcs_percolation,
                       mrs_greedy, normalized_bus_factor, robustness_curve)
from .strategies import RemovalOrder, removal_order

__all__ = [
    "BipartiteGraph", "RemovalMask", "Threshold", "build_graph", "connected_components",
    "filter_by_weight", "isolated_task_count", "tau", "BusFactorReport", "RobustnessCurve",
    "analyze", "gauss_area", "mcs_percolation", "mrs_greedy", "normalized_bus_factor",
    "robustness_curve", "RemovalOrder", "removal_order",
]
