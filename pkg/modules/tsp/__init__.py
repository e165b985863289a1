from modules.tsp.divide import (
    DenseLevel,
    Interface,
    TownSubInstance,
    TownWalk,
    TspResult,
    build_interface,
    find_dense_level,
    interface_span,
    solve_subset_tsp,
    solve_town,
    splice,
)
from modules.tsp.instance import GUARANTEE_FACTOR, TspInstance, prepare_instance, q_shape
from modules.tsp.patching import MATCHING_STRATEGIES, PatchResult, min_weight_matching, mst, patch_walks
from modules.tsp.solvers import (
    BRUTE_FORCE_LIMIT,
    HELD_KARP_LIMIT,
    SOLVERS,
    held_karp,
    nearest_neighbor_2opt,
    solve_metric_tour,
    tour_cost,
    tsp_brute_force,
)

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "DenseLevel",
    "GUARANTEE_FACTOR",
    "HELD_KARP_LIMIT",
    "Interface",
    "MATCHING_STRATEGIES",
    "PatchResult",
    "SOLVERS",
    "TownSubInstance",
    "TownWalk",
    "TspInstance",
    "TspResult",
    "build_interface",
    "find_dense_level",
    "interface_span",
    "held_karp",
    "min_weight_matching",
    "mst",
    "nearest_neighbor_2opt",
    "patch_walks",
    "prepare_instance",
    "q_shape",
    "solve_metric_tour",
    "solve_subset_tsp",
    "solve_town",
    "splice",
    "tour_cost",
    "tsp_brute_force",
]
