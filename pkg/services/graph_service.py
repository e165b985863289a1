import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

from config.settings import APSP_CAP
from models.config import RunConfig
from models.reports import InputFingerprint, Report
from modules.errors import ParameterError
from modules.graph_core import DistanceProvider, WeightedGraph, load_graph, rescale_to_unit_min

logger = logging.getLogger(__name__)


@dataclass
class LoadedGraph:
    graph: WeightedGraph
    dp: DistanceProvider
    scale: float
    fingerprint: InputFingerprint


class GraphService:
    """Loads the input graph of a run and fingerprints it for the report."""

    def __init__(self, apsp_cap: int = APSP_CAP):
        self.apsp_cap = apsp_cap

    def load(self, config: RunConfig, rescale: bool = False, scale: Optional[float] = None) -> LoadedGraph:
        """
        rescale=True multiplies weights so the minimum distance exceeds 1;
        an explicit scale (from a stored document) is applied as is.
        """
        if not config.input_path:
            raise ParameterError(f"{config.command} needs an input graph (--in)")
        graph = load_graph(config.input_path, config.format)
        return self.prepare(graph, rescale=rescale, scale=scale)

    def prepare(self, graph: WeightedGraph, rescale: bool = False, scale: Optional[float] = None) -> LoadedGraph:
        factor = 1.0
        if scale is not None and scale != 1.0:
            graph, factor = graph.scaled(scale), scale
        elif rescale:
            graph, factor = rescale_to_unit_min(graph)
            if factor != 1.0:
                logger.info("rescaled weights by %.6g so the minimum distance exceeds 1", factor)
        dp = DistanceProvider(graph, self.apsp_cap)
        fingerprint = InputFingerprint(
            path=graph.source.path,
            format=graph.source.format,
            vertices=graph.vertex_count,
            edges=graph.edge_count,
            scale=factor,
            dropped_self_loops=graph.source.dropped_self_loops,
            merged_parallel_edges=graph.source.merged_parallel_edges,
        )
        return LoadedGraph(graph, dp, factor, fingerprint)


def new_report(config: RunConfig, loaded: Optional[LoadedGraph] = None) -> Report:
    return Report(
        command=config.command,
        config=config.model_dump(exclude_none=True),
        input=loaded.fingerprint if loaded else None,
    )


@contextmanager
def timed(report: Report, name: str):
    """Record the wall-clock time of a block under report.timings[name]."""
    start = time.perf_counter()
    try:
        yield
    finally:
        report.timings[name] = round(time.perf_counter() - start, 6)
