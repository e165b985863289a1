"""
modules/decomp/padding.py

Monte Carlo padding estimate: how often does B(v, gamma r) land inside the
cluster of v. Centers and towns are computed once; only shifts are redrawn.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import beta

from config.settings import THREADS
from modules.errors import ParameterError
from modules.graph_core.distances import DistanceProvider
from modules.decomp.padded import CenterSet, assign, prepare_centers, sample_shifts

logger = logging.getLogger(__name__)

MAX_GAMMA = 0.125
CONFIDENCE = 0.99


@dataclass
class PaddingEstimate:
    gamma: float
    gamma_delta: float
    trials: int
    lam: float
    bound: float
    padded_counts: np.ndarray
    lower_bounds: np.ndarray

    @property
    def probabilities(self) -> np.ndarray:
        return self.padded_counts / self.trials

    @property
    def min_probability(self) -> float:
        return float(self.probabilities.min())

    @property
    def mean_probability(self) -> float:
        return float(self.probabilities.mean())

    @property
    def fraction_meeting_bound(self) -> float:
        return float(np.mean(self.lower_bounds >= self.bound))


def clopper_pearson_lower(successes: np.ndarray, trials: int, confidence: float = CONFIDENCE) -> np.ndarray:
    successes = np.asarray(successes)
    lower = beta.ppf(1 - confidence, successes, trials - successes + 1)
    return np.where(successes == 0, 0.0, lower)


def estimate_padding(
    dp: DistanceProvider,
    delta: float,
    eps: float,
    gamma: float,
    trials: int,
    seed: int,
    centers: CenterSet | None = None,
    threads: int = THREADS,
) -> PaddingEstimate:
    if not 0 <= gamma <= MAX_GAMMA:
        raise ParameterError(f"gamma must lie in [0, 1/8], got {gamma}")
    if trials < 1:
        raise ParameterError(f"trials must be at least 1, got {trials}")

    cs = centers or prepare_centers(dp, delta, eps)
    within = dp.matrix() <= gamma * cs.r + dp.tol

    def run(trial: int) -> np.ndarray:
        labels = assign(dp, cs.centers, sample_shifts(cs, seed, trial))
        same = labels[None, :] == labels[:, None]
        return np.all(~within | same, axis=1)

    counts = np.zeros(dp.n, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for padded in pool.map(run, range(trials)):
            counts += padded

    estimate = PaddingEstimate(
        gamma=gamma,
        gamma_delta=gamma * cs.r / cs.delta,
        trials=trials,
        lam=cs.lam,
        bound=math.exp(-4 * gamma * cs.lam),
        padded_counts=counts,
        lower_bounds=clopper_pearson_lower(counts, trials),
    )
    logger.info(
        "padding gamma=%.4g over %d trials: min %.4f mean %.4f vs bound %.4g",
        gamma, trials, estimate.min_probability, estimate.mean_probability, estimate.bound,
    )
    return estimate
