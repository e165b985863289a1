import logging

import numpy as np

from models.config import RunConfig
from models.documents import OracleBenchDocument, OracleQueryDocument
from models.reports import Report
from modules.errors import ParameterError
from modules.oracle import bench_oracle, build_oracle, query_pairs
from modules.treecover import build_tree_cover
from services.graph_service import GraphService, new_report, timed
from services.treecover_service import DEFAULT_EPS
from database.cover_store import load_oracle, save_oracle

logger = logging.getLogger(__name__)

CONSISTENCY_SAMPLE = 200


class OracleService:
    def __init__(self):
        self.graphs = GraphService()

    def cmd_oracle_build(self, config: RunConfig) -> Report:
        """Tree cover plus LCA tables, written to the binary oracle file."""
        if not config.save_path:
            raise ParameterError("oracle build needs an output file (--out)")
        eps = config.eps if config.eps is not None else DEFAULT_EPS
        loaded = self.graphs.load(config, rescale=True)
        report = new_report(config, loaded)

        with timed(report, "build"):
            tc = build_tree_cover(loaded.dp, eps, config.builder, config.threads)
            oracle = build_oracle(tc, scale=loaded.scale, threads=config.threads)

        # sandwich d <= est <= (1+2eps) d on a sample of pairs
        pairs = query_pairs(loaded.dp.n, CONSISTENCY_SAMPLE, config.seed)
        tol = loaded.dp.tol
        for u, v in pairs:
            d = loaded.dp.dist(int(u), int(v))
            est = oracle.query(int(u), int(v))
            if not d - tol <= est <= (1 + 2 * eps) * d + tol:
                report.check("sandwich", False, {"pair": [int(u), int(v)], "distance": d, "estimate": est})
                break
        else:
            report.check("sandwich", True)

        with timed(report, "save"):
            save_oracle(oracle, config.save_path)
        report.metrics.update({"trees": oracle.tree_count, "size_words": oracle.size_words, "saved_to": config.save_path})
        return report

    def cmd_oracle_query(self, config: RunConfig) -> Report:
        if not config.input_path or config.pair is None:
            raise ParameterError("oracle query needs an oracle file (--in) and two vertex ids")
        u, v = config.pair
        report = new_report(config)
        with timed(report, "load"):
            oracle = load_oracle(config.input_path, config.threads)
        if not (0 <= u < oracle.leaf_count and 0 <= v < oracle.leaf_count):
            raise ParameterError(f"vertex ids must lie in [0, {oracle.leaf_count}), got {u} and {v}")

        estimate = oracle.query(u, v)
        scanned = oracle.query_by_scan(u, v)
        report.check("matches_tree_scan", bool(np.isclose(estimate, scanned)), {"estimate": estimate, "scan": scanned})
        report.document = OracleQueryDocument(
            u=u, v=v, estimate=estimate, input_estimate=estimate / oracle.scale, scale=oracle.scale
        ).model_dump()
        return report

    def cmd_oracle_bench(self, config: RunConfig) -> Report:
        if not config.input_path:
            raise ParameterError("oracle bench needs an oracle file (--in)")
        report = new_report(config)
        with timed(report, "load"):
            oracle = load_oracle(config.input_path, config.threads)
        with timed(report, "bench"):
            stats = bench_oracle(oracle, config.queries, config.seed)
        report.document = OracleBenchDocument(
            count=stats.count,
            mean_us=stats.mean_us,
            median_us=stats.median_us,
            p99_us=stats.p99_us,
            queries_per_second=stats.queries_per_second,
            size_words=oracle.size_words,
            trees=oracle.tree_count,
            scale=oracle.scale,
        ).model_dump()
        return report
