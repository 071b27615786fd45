"""Accuracy metrics used by the benchmark harness."""

from __future__ import annotations

import numpy as np


def rrmse(estimates, truth: float) -> float:
    """Relative root-mean-square error of estimates against one truth."""
    est = np.asarray(estimates, dtype=np.float64)
    if est.size == 0:
        raise ValueError("need at least one estimate")
    if truth <= 0.0:
        raise ValueError(f"truth must be positive, got {truth}")
    return float(np.sqrt(np.mean((est - truth) ** 2)) / truth)


def aare(pairs) -> float:
    """Mean absolute relative error over (estimate, truth) pairs."""
    arr = np.asarray(list(pairs), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("need at least one (estimate, truth) pair")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("pairs must be (estimate, truth) tuples")
    est, truth = arr[:, 0], arr[:, 1]
    if np.any(truth <= 0.0):
        raise ValueError("every truth must be positive")
    return float(np.mean(np.abs(est - truth) / truth))
