"""
Re-verification of stored outputs against their graph.

JSON documents are recognized by their keys; tree-cover and oracle files by
their magic. The graph is rescaled by the factor recorded in the document so
the check runs in the units the document was produced in.
"""

import logging
from pathlib import Path

import numpy as np

from models.config import RunConfig
from models.documents import CoverDocument, HierarchyDocument, PartitionDocument, SpcDocument, TourDocument
from models.reports import Report
from modules.covers import Cluster, rebuild_cover, verify_cover
from modules.decomp import rebuild_partition, verify_partition
from modules.errors import GraphParseError, ParameterError
from modules.hierarchy import HubHierarchy, Walk, packing_violation, verify_hierarchy
from modules.spc import ShortestPathCover, towns_and_sprawl, verify_spc
from modules.treecover import verify_tree_cover
from services.graph_service import GraphService, LoadedGraph, new_report, timed
from database.cover_store import COVER_MAGIC, ORACLE_MAGIC, load_oracle, load_tree_cover
from database.documents import read_document, sniff_document

logger = logging.getLogger(__name__)


class VerifyService:
    def __init__(self):
        self.graphs = GraphService()

    def cmd_verify(self, config: RunConfig) -> Report:
        if not config.document_path:
            raise ParameterError("verify needs a document (--doc)")
        path = Path(config.document_path)
        with path.open("rb") as f:
            magic = f.read(8)
        if magic in (COVER_MAGIC, ORACLE_MAGIC):
            return self._verify_binary(config, magic == ORACLE_MAGIC)

        keys = sniff_document(path)
        if "walk" in keys:
            return self._verify_tour(config)
        if "hubs" in keys:
            return self._verify_spc(config)
        if "sigma" in keys:
            return self._verify_hierarchy(config)
        if "lambda" in keys:
            return self._verify_partition(config)
        if "sparsity" in keys:
            return self._verify_cover(config)
        raise GraphParseError(
            "cannot tell which construction this document holds; tree-cover summaries are verified "
            "through the binary written with --save",
            path=str(path),
        )

    def _load(self, config: RunConfig, scale: float) -> tuple[LoadedGraph, Report]:
        loaded = self.graphs.load(config, scale=scale)
        report = new_report(config, loaded)
        report.metrics["document_scale"] = scale
        return loaded, report

    def _verify_spc(self, config: RunConfig) -> Report:
        doc = read_document(config.document_path, SpcDocument)
        loaded, report = self._load(config, doc.scale)
        dp = loaded.dp
        spc = ShortestPathCover(r=doc.r, eps=doc.eps, hubs=np.asarray(doc.hubs, dtype=np.int64))
        with timed(report, "verify"):
            check = verify_spc(dp, spc)
        if not report.check("spc_valid", check.ok, check.witness()) or not doc.towns:
            return report

        decomposition = towns_and_sprawl(dp, spc)
        expected = {t.center: t.members.tolist() for t in decomposition.towns}
        stored = {t.center: sorted(t.members) for t in doc.towns}
        mismatch = sorted(set(expected) ^ set(stored)) or [c for c in sorted(expected) if expected[c] != stored[c]]
        report.check("towns_match", not mismatch, {"towns": mismatch[:5]})
        report.check(
            "sprawl_matches", decomposition.sprawl.tolist() == sorted(doc.sprawl), {"stored": len(doc.sprawl), "actual": len(decomposition.sprawl)}
        )
        return report

    def _verify_hierarchy(self, config: RunConfig) -> Report:
        doc = read_document(config.document_path, HierarchyDocument)
        loaded, report = self._load(config, doc.scale)
        levels = sorted(doc.levels, key=lambda lvl: lvl.i)
        if [lvl.i for lvl in levels] != list(range(len(levels))):
            raise GraphParseError("hierarchy levels must be numbered 0..L", path=config.document_path)
        hh = HubHierarchy(
            eps=doc.eps,
            sigma=doc.sigma,
            top_level=len(levels) - 1,
            h_prime=[np.unique(np.asarray(lvl.h_prime, dtype=np.int64)) for lvl in levels],
            h=[np.unique(np.asarray(lvl.h, dtype=np.int64)) for lvl in levels],
        )
        with timed(report, "verify"):
            packing = packing_violation(loaded.dp, hh)
            failures = verify_hierarchy(loaded.dp, hh)
        report.check("packing", packing is None, packing)
        report.check("levels_are_covers", not failures, {"failures": failures[:5]})
        return report

    def _verify_partition(self, config: RunConfig) -> Report:
        doc = read_document(config.document_path, PartitionDocument)
        loaded, report = self._load(config, doc.scale)
        partition = rebuild_partition(
            loaded.dp.n, doc.delta, doc.eps, doc.lam, doc.seed, doc.trial,
            [(c.center, c.kind, c.shift, np.asarray(c.members, dtype=np.int64)) for c in doc.clusters],
        )
        with timed(report, "verify"):
            check = verify_partition(loaded.graph, loaded.dp, partition)
        report.check("partition_valid", check.ok, {"violation": check.violation, **(check.witness or {})})
        return report

    def _verify_cover(self, config: RunConfig) -> Report:
        doc = read_document(config.document_path, CoverDocument)
        loaded, report = self._load(config, doc.scale)
        clusters = [
            Cluster(c.kind, c.anchor, np.unique(np.asarray(c.members, dtype=np.int64)), c.radius or 0.0)
            for c in doc.clusters
        ]
        cover = rebuild_cover(loaded.dp.n, doc.delta, doc.eps, clusters, doc.partitions)
        with timed(report, "verify"):
            check = verify_cover(loaded.dp, cover, strict_induced=config.strict_induced)
        report.check("cover_valid", check.ok, {"violation": check.violation, **(check.witness or {})})
        report.check(
            "sparsity_recount",
            cover.histogram == doc.sparsity.histogram,
            {"stored": doc.sparsity.histogram, "actual": cover.histogram},
        )
        return report

    def _verify_tour(self, config: RunConfig) -> Report:
        doc = read_document(config.document_path, TourDocument)
        loaded, report = self._load(config, doc.scale)
        dp = loaded.dp
        if not doc.walk or min(doc.walk) < 0 or max(doc.walk) >= dp.n:
            raise GraphParseError(f"walk must name vertices in 0..{dp.n - 1}", path=config.document_path)
        walk = Walk.of(doc.walk)
        cost = walk.cost(dp)
        report.check("walk_closed", walk.closed, {"first": walk.vertices[0], "last": walk.vertices[-1]})
        missing = sorted(set(doc.terminals) - set(walk.vertices))
        report.check("visits_terminals", not missing, {"missing": missing})
        report.check("cost_matches", bool(np.isclose(cost, doc.cost)), {"stored": doc.cost, "recomputed": cost})
        report.metrics["cost"] = cost
        return report

    def _verify_binary(self, config: RunConfig, oracle_file: bool) -> Report:
        if oracle_file:
            oracle = load_oracle(config.document_path, config.threads)
            tc, scale = oracle.tree_cover, oracle.scale
        else:
            oracle = None
            tc, scale = load_tree_cover(config.document_path)
        loaded, report = self._load(config, scale)
        dp = loaded.dp
        if tc.trees and tc.trees[0].leaf_count != dp.n:
            raise ParameterError(f"stored cover has {tc.trees[0].leaf_count} leaves but the graph has {dp.n} vertices")

        with timed(report, "verify"):
            check = verify_tree_cover(dp, tc)
        report.check("tree_cover_valid", check.ok, check.witness())
        report.metrics.update({"trees": tc.tree_count, "worst_stretch": check.worst_stretch})

        if oracle is not None:
            D = dp.matrix()
            tol = dp.tol
            with timed(report, "queries"):
                for u in range(dp.n):
                    estimates = np.asarray([oracle.query(u, v) for v in range(dp.n)])
                    bad = np.flatnonzero((estimates < D[u] - tol) | (estimates > (1 + 2 * oracle.eps) * D[u] + tol))
                    if len(bad):
                        v = int(bad[0])
                        report.check("oracle_sandwich", False, {"pair": [u, v], "distance": float(D[u, v]), "estimate": float(estimates[v])})
                        break
                else:
                    report.check("oracle_sandwich", True)
        return report
