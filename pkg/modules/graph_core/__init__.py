from modules.graph_core.graph import WeightedGraph, rescale_to_unit_min, vertex_set
from modules.graph_core.distances import (
    DistanceProvider,
    aspect_ratio,
    ball,
    induced_distance,
    single_source_distances,
    strong_diameter,
    weak_diameter,
)
from modules.graph_core.nets import NetHierarchy, gonzales_net_hierarchy
from modules.graph_core.loaders import load_graph, write_edge_list

__all__ = [
    "WeightedGraph",
    "DistanceProvider",
    "NetHierarchy",
    "aspect_ratio",
    "ball",
    "gonzales_net_hierarchy",
    "induced_distance",
    "load_graph",
    "rescale_to_unit_min",
    "single_source_distances",
    "strong_diameter",
    "vertex_set",
    "weak_diameter",
    "write_edge_list",
]
