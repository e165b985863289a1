import logging

from models.config import RunConfig
from models.documents import PartitionClusterDocument, PartitionDocument
from models.reports import Report
from modules.decomp import PaddedPartition, estimate_padding, prepare_centers, sample_partition, verify_partition
from services.graph_service import GraphService, new_report, timed

logger = logging.getLogger(__name__)

DEFAULT_EPS = 0.125


def partition_document(partition: PaddedPartition, scale: float = 1.0) -> PartitionDocument:
    return PartitionDocument(
        delta=partition.delta,
        eps=partition.eps,
        lam=partition.lam,
        seed=partition.seed,
        trial=partition.trial,
        clusters=[
            PartitionClusterDocument(
                center=int(partition.centers[idx]),
                kind=partition.kinds[idx],
                shift=float(partition.shifts[idx]),
                members=members.tolist(),
            )
            for idx, members in partition.clusters
        ],
        scale=scale,
    )


class DecompService:
    def __init__(self):
        self.graphs = GraphService()

    def cmd_decompose(self, config: RunConfig) -> Report:
        """
        Sample `trials` strong padded decompositions with shared centers and
        verify each one. With --gamma, also estimate per-vertex padding
        probabilities against e^{-4 gamma lambda}.
        """
        eps = config.eps if config.eps is not None else DEFAULT_EPS
        loaded = self.graphs.load(config)
        dp = loaded.dp
        report = new_report(config, loaded)

        with timed(report, "centers"):
            centers = prepare_centers(dp, config.delta, eps, config.lam, config.builder)
        report.metrics.update(
            {
                "r": centers.r,
                "lambda": centers.lam,
                "hubs": int(len(centers.spc.hubs)),
                "towns": len(centers.towns.towns),
                "sparsity": centers.sparsity,
                "max_nearby_centers": centers.max_nearby_centers,
            }
        )

        first = None
        cluster_counts = []
        with timed(report, "sample"):
            for trial in range(config.trials):
                partition = sample_partition(dp, centers, config.seed, trial)
                check = verify_partition(loaded.graph, dp, partition)
                if not report.check(f"partition_trial_{trial}", check.ok, {"violation": check.violation, **(check.witness or {})}):
                    break
                cluster_counts.append(len(partition.clusters))
                if first is None:
                    first = partition
        report.metrics["clusters_per_trial"] = cluster_counts

        if config.gamma is not None:
            with timed(report, "padding"):
                estimate = estimate_padding(
                    dp, config.delta, eps, config.gamma, config.trials, config.seed, centers, config.threads
                )
            report.metrics["padding"] = {
                "gamma": estimate.gamma,
                "gamma_delta": estimate.gamma_delta,
                "trials": estimate.trials,
                "bound": estimate.bound,
                "min_probability": estimate.min_probability,
                "mean_probability": estimate.mean_probability,
                "fraction_meeting_bound": estimate.fraction_meeting_bound,
            }

        if first is not None:
            report.document = partition_document(first, loaded.scale).model_dump(by_alias=True)
        return report
