import logging
import math

import numpy as np

from models.config import RunConfig
from models.documents import SpcDocument, TownDocument
from models.reports import Report
from modules.errors import ParameterError
from modules.graph_core import DistanceProvider, gonzales_net_hierarchy
from modules.hierarchy.hubs import MAX_EPS
from modules.spc import (
    LocalSearchTrace,
    ShortestPathCover,
    TownDecomposition,
    build_spc_local_search,
    epsnet_spc,
    greedy_spc,
    local_sparsity,
    minimalize_spc,
    towns_and_sprawl,
    verify_hub_bounds,
    verify_spc,
)
from services.graph_service import GraphService, new_report, timed

logger = logging.getLogger(__name__)


def spc_document(spc: ShortestPathCover, towns: TownDecomposition | None, sparsity: int, scale: float = 1.0) -> SpcDocument:
    return SpcDocument(
        r=spc.r,
        eps=spc.eps,
        hubs=spc.hubs.tolist(),
        towns=[
            TownDocument(center=t.center, members=t.members.tolist(), boundary_distance=t.boundary_distance)
            for t in (towns.towns if towns else [])
        ],
        sprawl=towns.sprawl.tolist() if towns else [],
        local_sparsity=sparsity,
        scale=scale,
    )


class SpcService:
    def __init__(self):
        self.graphs = GraphService()

    def _build(self, dp: DistanceProvider, config: RunConfig, report: Report) -> ShortestPathCover:
        eps = config.eps if config.eps is not None else 0.0
        if config.builder == "epsnet":
            return epsnet_spc(dp, config.r, eps)
        if config.builder == "greedy":
            return greedy_spc(dp, config.r, eps, config.hs_strategy)
        if config.builder != "local-search":
            raise ParameterError(
                f"unknown SPC builder '{config.builder}'. Available: ['local-search', 'greedy', 'epsnet']"
            )
        trace = LocalSearchTrace()
        spc = build_spc_local_search(dp, config.r, eps, config.hs_strategy, trace=trace)
        report.metrics["local_search"] = {"iterations": trace.iterations, "sizes": trace.sizes}
        return spc

    def cmd_spc(self, config: RunConfig) -> Report:
        """Build an (r, eps)-cover, verify it and derive its towns."""
        loaded = self.graphs.load(config)
        dp = loaded.dp
        report = new_report(config, loaded)

        with timed(report, "build"):
            spc = self._build(dp, config, report)
        with timed(report, "verify"):
            check = verify_spc(dp, spc)
        report.check("spc_valid", check.ok, check.witness())

        with timed(report, "towns"):
            towns = towns_and_sprawl(dp, spc) if check.ok else None
        s, witness = local_sparsity(dp, spc)
        report.metrics.update(
            {"hubs": int(len(spc.hubs)), "local_sparsity": s, "sparsity_witness": witness, "r": spc.r, "eps": spc.eps}
        )
        if towns is not None:
            report.metrics["towns"] = len(towns.towns)
            report.metrics["sprawl"] = int(len(towns.sprawl))
            report.metrics["off_center_towns"] = towns.off_center_towns()
        report.document = spc_document(spc, towns, s).model_dump(by_alias=True)
        return report

    def cmd_towns(self, config: RunConfig) -> Report:
        """Town/sprawl decomposition of a minimal cover, with the hub-count bounds."""
        loaded = self.graphs.load(config)
        dp = loaded.dp
        report = new_report(config, loaded)

        with timed(report, "build"):
            spc = minimalize_spc(dp, self._build(dp, config, report))
        with timed(report, "towns"):
            towns = towns_and_sprawl(dp, spc)
        bounds = verify_hub_bounds(dp, spc)

        check = verify_spc(dp, spc)
        report.check("spc_valid", check.ok, check.witness())
        report.check("near_ball_bound", not bounds.near_flagged, {"vertices": bounds.near_flagged[:10], "limit": bounds.near_limit})
        report.check("wide_ball_bound", not bounds.wide_flagged, {"vertices": bounds.wide_flagged[:10], "limit": bounds.wide_limit})
        report.metrics.update(
            {
                "hubs": int(len(spc.hubs)),
                "towns": len(towns.towns),
                "sprawl": int(len(towns.sprawl)),
                "local_sparsity": bounds.local_sparsity,
                "max_near_ball_count": int(bounds.near_ball_counts.max()) if dp.n else 0,
                "max_wide_ball_count": int(bounds.wide_ball_counts.max()) if dp.n else 0,
                "off_center_towns": towns.off_center_towns(),
            }
        )
        report.document = spc_document(spc, towns, bounds.local_sparsity).model_dump(by_alias=True)
        return report

    def cmd_profile(self, config: RunConfig) -> Report:
        """Local sparsity of a minimal cover at every hierarchy scale r_i = (1+sigma)^i."""
        eps = config.eps if config.eps is not None else MAX_EPS
        if not 0 < eps <= 1:
            raise ParameterError(f"profile eps must lie in (0, 1], got {eps}")
        loaded = self.graphs.load(config, rescale=True)
        dp = loaded.dp
        report = new_report(config, loaded)

        sigma = eps / (4 + 3 * eps)
        top = max(0, math.ceil(math.log(dp.diameter) / math.log(1 + sigma))) if dp.diameter > 1 else 0
        rows = []
        with timed(report, "sweep"):
            for i in range(top + 1):
                r = (1 + sigma) ** i
                spc = minimalize_spc(dp, self._build(dp, config.model_copy(update={"r": r, "eps": eps}), report))
                s, witness = local_sparsity(dp, spc)
                rows.append({"i": i, "r": r, "hubs": int(len(spc.hubs)), "local_sparsity": s, "witness": witness})
        report.metrics.pop("local_search", None)
        report.metrics["scales"] = rows
        report.metrics["max_local_sparsity"] = max((row["local_sparsity"] for row in rows), default=0)
        return report

    def cmd_nets(self, config: RunConfig) -> Report:
        """Gonzales order and the per-level sizes of the net hierarchy."""
        loaded = self.graphs.load(config)
        dp = loaded.dp
        report = new_report(config, loaded)
        with timed(report, "build"):
            nets = gonzales_net_hierarchy(dp, config.base, config.ratio)

        levels = []
        for i, members in enumerate(nets.levels):
            delta = nets.radius(i)
            block = dp.submatrix(members, members) + np.diag(np.full(len(members), np.inf))
            packing = float(block.min()) if len(members) > 1 else math.inf
            covering = float(dp.submatrix(np.arange(dp.n), members).min(axis=1).max())
            ok = packing > delta - dp.tol and covering <= delta + dp.tol
            report.check(f"net_level_{i}", ok, {"level": i, "radius": delta, "packing": packing, "covering": covering})
            levels.append({"i": i, "radius": delta, "size": int(len(members))})

        report.metrics.update(
            {
                "gonzales_order": nets.gonzales_order.tolist(),
                "insertion_radii": [None if math.isinf(x) else float(x) for x in nets.insertion_radii],
                "levels": levels,
            }
        )
        return report
