"""Float-register baseline sketches for weighted cardinality.

Both sketches keep m float64 registers initialized to +inf and expose the
same closed-form estimator: with every register touched, sum(R) is
Gamma(m, C) distributed for true weighted cardinality C, so
(m - 1) / sum(R) is an unbiased estimate with relative variance 1/(m - 2).

LmSketch addresses every register per element with an independent
exponential draw (m draws, O(m) per update).  FastGmSketch produces the
same per-register distribution by generating each element's exponentials
in ascending order and assigning positions with an incremental shuffle,
stopping once the running value exceeds the current register maximum —
identical in law, not in pointwise register values.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from ._hash import MASK64, key_to_u64
from .reports import FLAG_NOT_SATURATED, EstimateReport


def _coerce_batch(keys, weights) -> tuple[np.ndarray, np.ndarray]:
    k = np.asarray(keys, dtype=np.uint64)
    w = np.asarray(weights, dtype=np.float64)
    if k.shape != w.shape or k.ndim != 1:
        raise ValueError("keys and weights must be 1-d arrays of equal length")
    if w.size and not (np.all(w > 0.0) and np.all(np.isfinite(w))):
        raise ValueError("weights must be positive and finite")
    return k, w


def _check_weight(weight: float) -> float:
    w = float(weight)
    if not (w > 0.0 and math.isfinite(w)):
        raise ValueError(f"weight must be positive and finite, got {weight}")
    return w


class _GammaEstimatorMixin:
    """Shared closed-form estimator over float64 min-registers."""

    def estimate(self) -> EstimateReport:
        """Weighted cardinality estimate (m - 1) / sum(R).

        If any register is still +inf the stream cannot have covered the
        sketch; the report carries estimate 0 and the not_saturated flag.
        The variance field is the plug-in estimate**2 / (m - 2), infinite
        for m < 3.
        """
        registers = self.registers
        m = registers.shape[0]
        if np.isinf(registers).any():
            return EstimateReport(0.0, 0.0, converged=False, flag=FLAG_NOT_SATURATED)
        est = (m - 1) / float(registers.sum())
        var = est * est / (m - 2) if m > 2 else math.inf
        return EstimateReport(est, var)


class LmSketch(_GammaEstimatorMixin):
    """m float64 registers, each taking the min of per-element EXP(w) draws."""

    __slots__ = ("m", "seed", "registers")

    def __init__(self, m: int, seed: int):
        if m < 1:
            raise ValueError(f"register count must be >= 1, got {m}")
        self.m = m
        self.seed = int(seed) & MASK64
        self.registers = np.full(m, np.inf, dtype=np.float64)

    def update(self, key, weight: float) -> None:
        self.update_many([key_to_u64(key)], [_check_weight(weight)])

    def update_many(self, keys, weights) -> None:
        k, w = _coerce_batch(keys, weights)
        if k.size:
            kernels.lm_update_many(self.registers, np.uint64(self.seed), k, w)


class FastGmSketch(_GammaEstimatorMixin):
    """Ascending-order variant of LmSketch with optional early stopping.

    With early_stop=True an element stops generating once its running
    exponential exceeds every register (possible only after all m registers
    are finite); the skipped values could never win a min, so final state
    is identical to the exhaustive run.
    """

    __slots__ = ("m", "seed", "early_stop", "registers")

    def __init__(self, m: int, seed: int, early_stop: bool = True):
        if m < 1:
            raise ValueError(f"register count must be >= 1, got {m}")
        self.m = m
        self.seed = int(seed) & MASK64
        self.early_stop = bool(early_stop)
        self.registers = np.full(m, np.inf, dtype=np.float64)

    @property
    def filled_count(self) -> int:
        """Number of registers that have left their +inf initial state."""
        return int(np.isfinite(self.registers).sum())

    def update(self, key, weight: float) -> None:
        self.update_many([key_to_u64(key)], [_check_weight(weight)])

    def update_many(self, keys, weights) -> None:
        k, w = _coerce_batch(keys, weights)
        if k.size:
            kernels.fastgm_update_many(
                self.registers, np.uint64(self.seed), k, w, self.early_stop
            )
