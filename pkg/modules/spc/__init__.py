from modules.spc.cover import (
    HubBoundsReport,
    LocalSearchTrace,
    PairCoverage,
    ShortestPathCover,
    SpcCheck,
    build_spc,
    build_spc_local_search,
    epsnet_spc,
    greedy_spc,
    local_sparsity,
    minimalize_spc,
    near_ball_counts,
    verify_hub_bounds,
    verify_spc,
)
from modules.spc.hitting_set import HittingSetInstance, solve_hitting_set
from modules.spc.towns import Town, TownDecomposition, hub_distances, towns_and_sprawl
