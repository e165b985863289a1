import logging

import numpy as np

from models.config import RunConfig
from models.documents import TourDocument
from models.reports import Report
from modules.errors import ParameterError
from modules.hierarchy.hubs import MAX_EPS
from modules.tsp import BRUTE_FORCE_LIMIT, TspResult, prepare_instance, solve_subset_tsp, tsp_brute_force
from services.graph_service import GraphService, new_report, timed
from database.documents import read_terminals

logger = logging.getLogger(__name__)


def tour_document(result: TspResult, scale: float, optimum: float | None = None) -> TourDocument:
    ratio = None
    if optimum is not None:
        ratio = result.cost / optimum if optimum > 0 else 1.0
    return TourDocument(
        cost=result.cost,
        walk=list(result.walk.vertices),
        certified=result.certified,
        ratio_vs_bruteforce=ratio,
        terminals=result.terminals.tolist(),
        input_cost=result.cost / scale,
        guarantee=result.guarantee,
        target=result.target,
        scale=scale,
    )


class TspService:
    def __init__(self):
        self.graphs = GraphService()

    def cmd_tsp(self, config: RunConfig) -> Report:
        """
        Subset TSP by divide and conquer over the hub hierarchy. With at most
        BRUTE_FORCE_LIMIT terminals the optimum is also computed and the
        ratio reported.
        """
        if not config.terminals_path:
            raise ParameterError("tsp solve needs a terminal file (--terminals)")
        eps = config.eps if config.eps is not None else MAX_EPS
        loaded = self.graphs.load(config, rescale=True)
        dp = loaded.dp
        report = new_report(config, loaded)
        terminals = read_terminals(config.terminals_path)

        with timed(report, "prepare"):
            inst = prepare_instance(
                dp, terminals, eps, config.q, config.solver, config.matching, config.builder, config.threads
            )
        with timed(report, "solve"):
            result = solve_subset_tsp(inst)

        walk = result.walk
        report.check("walk_closed", walk.closed, {"first": walk.vertices[0], "last": walk.vertices[-1]})
        missing = sorted(set(result.terminals.tolist()) - set(walk.vertices))
        report.check("visits_terminals", not missing, {"missing": missing})
        connections = float(sum(dp.dist(a, b) for a, b in walk.connections()))
        report.check("cost_is_sum_of_connections", bool(np.isclose(connections, result.cost)), {"recomputed": connections, "cost": result.cost})

        optimum = None
        if len(result.terminals) <= BRUTE_FORCE_LIMIT:
            with timed(report, "bruteforce"):
                _, optimum = tsp_brute_force(dp, result.terminals)
            bound = result.guarantee * optimum + dp.tol * len(walk.vertices)
            report.check(
                "within_guarantee",
                result.cost <= bound or not result.certified,
                {"cost": result.cost, "optimum": optimum, "guarantee": result.guarantee},
            )
            report.metrics["within_target"] = bool(result.cost <= result.target * optimum + dp.tol * len(walk.vertices))

        report.metrics.update(
            {
                **result.summary(),
                "q": inst.q,
                "hierarchy_levels": inst.hierarchy.top_level + 1 if inst.hierarchy_built else 0,
                "optimum": optimum,
                "events": result.events,
            }
        )
        report.document = tour_document(result, loaded.scale, optimum).model_dump()
        return report
