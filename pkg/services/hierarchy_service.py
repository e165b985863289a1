import logging

from models.config import RunConfig
from models.documents import HierarchyDocument, HierarchyLevelDocument
from models.reports import Report
from modules.hierarchy import (
    HubHierarchy,
    build_hub_hierarchy,
    hierarchy_nets,
    hierarchy_sparsity_report,
    hierarchy_towns,
    packing_violation,
    verify_hierarchy,
)
from modules.hierarchy.hubs import MAX_EPS
from services.graph_service import GraphService, new_report, timed

logger = logging.getLogger(__name__)


def hierarchy_document(hh: HubHierarchy, scale: float = 1.0) -> HierarchyDocument:
    return HierarchyDocument(
        eps=hh.eps,
        sigma=hh.sigma,
        levels=[
            HierarchyLevelDocument(i=i, r=hh.radius(i), h_prime=hh.h_prime[i].tolist(), h=hh.h[i].tolist())
            for i in range(hh.top_level + 1)
        ],
        scale=scale,
    )


class HierarchyService:
    def __init__(self):
        self.graphs = GraphService()

    def cmd_hierarchy(self, config: RunConfig) -> Report:
        """Hub hierarchy H_0 ⊇ ... ⊇ H_L with nets; every auxiliary level re-verified."""
        eps = config.eps if config.eps is not None else MAX_EPS
        loaded = self.graphs.load(config, rescale=True)
        dp = loaded.dp
        report = new_report(config, loaded)

        with timed(report, "build"):
            hh = build_hub_hierarchy(dp, eps, config.builder, config.threads)
        with timed(report, "verify"):
            failures = verify_hierarchy(dp, hh)
        report.check("levels_are_covers", not failures, {"failures": failures[:5]})
        packing = packing_violation(dp, hh)
        report.check("packing", packing is None, packing)

        nets = hierarchy_nets(dp, hh)
        with timed(report, "towns"):
            towns = hierarchy_towns(dp, hh)
        rows = hierarchy_sparsity_report(dp, hh)
        for row, decomposition in zip(rows, towns):
            row["towns"] = len(decomposition.towns)
            row["net_size"] = nets.size(row["i"])

        report.metrics.update(
            {
                "levels": hh.top_level + 1,
                "sigma": hh.sigma,
                "max_local_sparsity": max((row["max_ball_count"] for row in rows), default=0),
                "per_level": rows,
            }
        )
        report.document = hierarchy_document(hh, loaded.scale).model_dump(by_alias=True)
        return report
