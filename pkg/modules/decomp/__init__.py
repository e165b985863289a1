from modules.decomp.padded import (
    CenterSet,
    PaddedPartition,
    PartitionCheck,
    nearby_radius,
    padded_decomposition,
    prepare_centers,
    rebuild_partition,
    sample_partition,
    verify_partition,
)
from modules.decomp.padding import PaddingEstimate, estimate_padding
from modules.decomp.texp import center_stream, sample_texp, texp_cdf
