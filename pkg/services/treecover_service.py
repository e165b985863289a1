import logging

import numpy as np

from models.config import RunConfig
from models.documents import TreeCoverSummary, TreeSummaryDocument
from models.reports import Report
from modules.treecover import TreeCover, TreeCoverCheck, build_tree_cover, verify_tree_cover
from services.graph_service import GraphService, new_report, timed
from database.cover_store import save_tree_cover

logger = logging.getLogger(__name__)

DEFAULT_EPS = 0.5


def tree_cover_summary(tc: TreeCover, check: TreeCoverCheck, scale: float = 1.0) -> TreeCoverSummary:
    return TreeCoverSummary(
        eps=tc.eps,
        K=tc.K,
        levels=len(tc.radii),
        s_max=tc.s_max,
        trees=[
            TreeSummaryDocument(
                q=tree.q,
                j=tree.j,
                nodes=tree.node_count,
                edges=tree.node_count - 1,
                hub_copies=int(np.count_nonzero(tree.node_level >= 0)),
            )
            for tree in tc.trees
        ],
        worst_stretch=check.worst_stretch,
        worst_pair=list(check.worst_pair) if check.worst_pair else None,
        scale=scale,
    )


class TreeCoverService:
    def __init__(self):
        self.graphs = GraphService()

    def cmd_treecover(self, config: RunConfig) -> Report:
        eps = config.eps if config.eps is not None else DEFAULT_EPS
        loaded = self.graphs.load(config, rescale=True)
        report = new_report(config, loaded)

        with timed(report, "build"):
            tc = build_tree_cover(loaded.dp, eps, config.builder, config.threads)
        with timed(report, "verify"):
            check = verify_tree_cover(loaded.dp, tc)
        report.check("tree_cover_valid", check.ok, check.witness())

        report.metrics.update(
            {
                "trees": tc.tree_count,
                "K": tc.K,
                "s_max": tc.s_max,
                "levels": len(tc.radii),
                "worst_stretch": check.worst_stretch,
                "stretch_bound": 1 + 2 * eps,
            }
        )
        if config.save_path:
            save_tree_cover(tc, config.save_path, loaded.scale)
            report.metrics["saved_to"] = config.save_path
        report.document = tree_cover_summary(tc, check, loaded.scale).model_dump()
        return report
