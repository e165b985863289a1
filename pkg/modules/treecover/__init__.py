from modules.treecover.builder import (
    TreeCover,
    build_cover_tree,
    build_tree_cover,
    partition_spc_groups,
    tree_cover_levels,
)
from modules.treecover.tree import CoverTree, tree_distance
from modules.treecover.verify import TreeCoverCheck, leaf_distances, verify_tree_cover
