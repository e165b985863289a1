"""
modules/decomp/texp.py

Truncated exponential distribution Texp_[theta1, theta2](lambda) and the
per-center random streams that drive shifted-start clustering.
"""

from __future__ import annotations

import numpy as np

from modules.errors import ParameterError


def _check(lam: float, theta1: float, theta2: float) -> None:
    if not theta1 < theta2:
        raise ParameterError(f"truncation interval must satisfy theta1 < theta2, got [{theta1}, {theta2}]")
    if not lam > 0:
        raise ParameterError(f"lambda must be positive, got {lam}")


def sample_texp(lam: float, theta1: float, theta2: float, rng: np.random.Generator, size: int | None = None):
    """
    Inverse-CDF draw with density lam e^{-lam y} / (e^{-lam theta1} - e^{-lam theta2})
    on [theta1, theta2]. expm1/log1p keep tiny lambda numerically uniform.
    """
    _check(lam, theta1, theta2)
    u = rng.random(size)
    y = theta1 - np.log1p(u * np.expm1(-lam * (theta2 - theta1))) / lam
    y = np.clip(y, theta1, theta2)
    return float(y) if size is None else y


def texp_cdf(y, lam: float, theta1: float, theta2: float):
    _check(lam, theta1, theta2)
    y = np.clip(y, theta1, theta2)
    return np.expm1(-lam * (y - theta1)) / np.expm1(-lam * (theta2 - theta1))


def center_stream(seed: int, trial: int, center: int) -> np.random.Generator:
    """Counter-based (Philox) stream keyed by (seed, trial, center)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(trial), int(center)])))
