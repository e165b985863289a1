from pydantic import BaseModel, ConfigDict, Field
from typing import Optional, List, Dict, Any


# ---------------------------------------------------------------------------
# Shortest-path covers and towns
# ---------------------------------------------------------------------------

class TownDocument(BaseModel):
    center: int
    members: List[int]
    boundary_distance: Optional[float] = None


class SpcDocument(BaseModel):
    """One (r, eps) shortest-path cover with its town/sprawl decomposition"""
    r: float
    eps: float
    hubs: List[int]
    towns: List[TownDocument] = []
    sprawl: List[int] = []
    local_sparsity: Optional[int] = None
    scale: float = 1.0


# ---------------------------------------------------------------------------
# Hub hierarchy
# ---------------------------------------------------------------------------

class HierarchyLevelDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    i: int
    r: float
    h_prime: List[int] = Field(alias="H_prime")
    h: List[int] = Field(alias="H")


class HierarchyDocument(BaseModel):
    eps: float
    sigma: float
    levels: List[HierarchyLevelDocument]
    scale: float = 1.0


# ---------------------------------------------------------------------------
# Padded decompositions and covers
# ---------------------------------------------------------------------------

class PartitionClusterDocument(BaseModel):
    center: int
    kind: str  # 'hub' or 'town'
    shift: float
    members: List[int]


class PartitionDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    delta: float = Field(alias="Delta")
    eps: float
    lam: float = Field(alias="lambda")
    seed: int
    trial: int = 0
    clusters: List[PartitionClusterDocument]
    scale: float = 1.0


class ClusterDocument(BaseModel):
    kind: str
    anchor: int
    members: List[int]
    radius: Optional[float] = None


class SparsityDocument(BaseModel):
    max: int
    histogram: List[int]


class CoverDocument(BaseModel):
    """Sparse cover; a partition cover also lists its partitions as cluster ids"""
    model_config = ConfigDict(populate_by_name=True)

    delta: float = Field(alias="Delta")
    eps: float
    clusters: List[ClusterDocument]
    sparsity: SparsityDocument
    partitions: Optional[List[List[int]]] = None
    scale: float = 1.0


# ---------------------------------------------------------------------------
# Tree covers, oracles and tours
# ---------------------------------------------------------------------------

class TreeSummaryDocument(BaseModel):
    q: int
    j: int
    nodes: int
    edges: int
    hub_copies: int


class TreeCoverSummary(BaseModel):
    eps: float
    K: int
    levels: int
    s_max: int
    trees: List[TreeSummaryDocument]
    worst_stretch: float
    worst_pair: Optional[List[int]] = None
    scale: float = 1.0


class TourDocument(BaseModel):
    cost: float
    walk: List[int]
    certified: bool
    ratio_vs_bruteforce: Optional[float] = None
    terminals: List[int] = []
    input_cost: Optional[float] = None  # cost in the units of the input graph
    guarantee: Optional[float] = None
    target: Optional[float] = None
    scale: float = 1.0


class OracleQueryDocument(BaseModel):
    u: int
    v: int
    estimate: float
    input_estimate: float
    scale: float = 1.0


class OracleBenchDocument(BaseModel):
    count: int
    mean_us: Optional[float] = None
    median_us: Optional[float] = None
    p99_us: Optional[float] = None
    queries_per_second: Optional[float] = None
    size_words: int
    trees: int
    scale: float = 1.0


DOCUMENT_MODELS: Dict[str, Any] = {
    "spc": SpcDocument,
    "hierarchy": HierarchyDocument,
    "partition": PartitionDocument,
    "cover": CoverDocument,
    "treecover": TreeCoverSummary,
    "tour": TourDocument,
    "oracle-query": OracleQueryDocument,
    "oracle-bench": OracleBenchDocument,
}
