import logging
from typing import Union

from models.config import RunConfig
from models.documents import ClusterDocument, CoverDocument, SparsityDocument
from models.reports import Report
from modules.covers import SparseCover, SparsePartitionCover, sparse_cover, sparse_partition_cover, verify_cover
from services.graph_service import GraphService, new_report, timed

logger = logging.getLogger(__name__)

DEFAULT_COVER_EPS = 0.1
DEFAULT_PARTITION_EPS = 0.5


def cover_document(cover: Union[SparseCover, SparsePartitionCover], scale: float = 1.0) -> CoverDocument:
    return CoverDocument(
        delta=cover.delta,
        eps=cover.eps,
        clusters=[
            ClusterDocument(kind=c.kind, anchor=c.anchor, members=c.members.tolist(), radius=c.radius)
            for c in cover.clusters
        ],
        sparsity=SparsityDocument(max=cover.max_sparsity, histogram=cover.histogram),
        partitions=getattr(cover, "partitions", None),
        scale=scale,
    )


class CoverService:
    def __init__(self):
        self.graphs = GraphService()

    def _finish(self, report: Report, dp, cover, config: RunConfig, scale: float) -> Report:
        with timed(report, "verify"):
            check = verify_cover(dp, cover, strict_induced=config.strict_induced)
        report.check("cover_valid", check.ok, {"violation": check.violation, **(check.witness or {})})
        report.metrics.update(
            {
                "r": cover.r,
                "clusters": len(cover.clusters),
                "max_sparsity": cover.max_sparsity,
                "spc_sparsity": cover.spc_sparsity,
                "padded_radius": cover.padded_radius,
            }
        )
        if config.strict_induced:
            report.metrics["induced_over_delta"] = check.induced_over_delta
        report.document = cover_document(cover, scale).model_dump(by_alias=True)
        return report

    def cmd_cover(self, config: RunConfig) -> Report:
        eps = config.eps if config.eps is not None else DEFAULT_COVER_EPS
        loaded = self.graphs.load(config)
        report = new_report(config, loaded)
        with timed(report, "build"):
            cover = sparse_cover(loaded.dp, config.delta, eps, config.builder)
        return self._finish(report, loaded.dp, cover, config, loaded.scale)

    def cmd_partition_cover(self, config: RunConfig) -> Report:
        """Sparse partition cover; partitions are listed as cluster indices."""
        eps = config.eps if config.eps is not None else DEFAULT_PARTITION_EPS
        loaded = self.graphs.load(config)
        report = new_report(config, loaded)
        with timed(report, "build"):
            cover = sparse_partition_cover(loaded.dp, config.delta, eps, config.builder)
        report.metrics["partitions"] = len(cover.partitions)
        return self._finish(report, loaded.dp, cover, config, loaded.scale)
