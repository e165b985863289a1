from modules.covers.clusters import (
    Cluster,
    SparseCover,
    SparsePartitionCover,
    count_membership,
    hub_cluster,
    rebuild_cover,
    sparse_cover,
    sparse_partition_cover,
)
from modules.covers.verify import CoverCheck, verify_cover
