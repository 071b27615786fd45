"""Maximum-likelihood cardinality recovery from quantized registers.

A register holding the floored negative log2 of an EXP(C) draw, clamped to
[r_min, r_max], follows a truncated geometric-like law.  The score function
below is the derivative of the log-likelihood of the observed register
multiset with respect to C; its unique positive root is the estimate.
Registers enter only through their value counts, so one evaluation costs
O(2**bits) regardless of m.
"""

from __future__ import annotations

import math

import numpy as np

from .packed import register_bounds
from .reports import (
    FLAG_ALL_MAX,
    FLAG_ALL_MIN,
    FLAG_NOT_CONVERGED,
    EstimateReport,
)

MAX_ITERATIONS = 100
REL_TOL = 1e-9
_MAX_HALVINGS = 5
_BRACKET_SPAN = 2.0**20


def score_terms(C: float, counts: np.ndarray, bits: int) -> tuple[float, float]:
    """(f, f') of the register log-likelihood at cardinality C.

    ``counts[k]`` is the number of registers holding value k + r_min.  Three
    regimes contribute:

    * value r_min (left tail): constant slope -2**-(r_min+1), no curvature;
    * interior value v: with a = 2**-(v+1) and x = C*a, the term
      a*(2*exp(-x) - 1)/(1 - exp(-x));
    * value r_max (right tail): with a = 2**-r_max, the term
      a*exp(-x)/(1 - exp(-x)).

    Interior and right-tail curvature share the form -a**2*exp(-x)/(1-exp(-x))**2.
    Evaluated via expm1 so small x keeps full precision and large x
    underflows cleanly to the -a / 0 limits.
    """
    if not (C > 0.0 and math.isfinite(C)):
        raise ValueError(f"cardinality must be positive and finite, got {C}")
    r_min, r_max = register_bounds(bits)
    ks = np.nonzero(counts)[0]
    vals = ks + r_min
    cnt = counts[ks].astype(np.float64)

    f = 0.0
    fp = 0.0
    low = vals == r_min
    if low.any():
        f -= float(cnt[low].sum()) * 2.0 ** (-(r_min + 1))

    live = ~low
    if live.any():
        v = vals[live]
        c = cnt[live]
        at_max = v == r_max
        a = np.where(at_max, 2.0 ** (-v.astype(np.float64)), 2.0 ** (-(v + 1.0)))
        with np.errstate(over="ignore"):
            x = C * a
        ex = np.exp(-x)
        em = -np.expm1(-x)
        num = np.where(at_max, ex, 2.0 * ex - 1.0)
        f += float(np.dot(c, a * num / em))
        fp += float(np.dot(c, -(a * a) * ex / (em * em)))
    return f, fp


def valid_range(bits: int, epsilon: float) -> tuple[float, float]:
    """Cardinality interval where a register truncates with prob <= epsilon per side.

    Below the lower endpoint mass spills past r_max (values too large);
    above the upper endpoint it spills past r_min.  Total truncated mass
    inside the interval is at most 2*epsilon.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    r_min, r_max = register_bounds(bits)
    low = -(2.0 ** (r_min + 1)) * math.log(epsilon)
    high = -(2.0 ** float(r_max)) * math.log1p(-epsilon)
    return low, high


def solve(counts: np.ndarray, bits: int) -> EstimateReport:
    """Newton-Raphson root of the score with step-halving safeguards.

    Degenerate register states short-circuit: all registers at r_min means
    an empty stream (estimate 0); all at r_max means the cardinality sits
    beyond quantization reach, reported as the upper end of
    valid_range(bits, 0.001) with the all_max flag.  The variance field is
    the observed-information proxy -1/f'(estimate).
    """
    counts = np.asarray(counts, dtype=np.int64)
    r_min, r_max = register_bounds(bits)
    nbins = 1 << bits
    if counts.shape != (nbins,):
        raise ValueError(f"counts must have length {nbins}")
    m = int(counts.sum())
    if m < 1:
        raise ValueError("counts must cover at least one register")

    if counts[0] == m:
        return EstimateReport(0.0, 0.0, converged=False, flag=FLAG_ALL_MIN)
    if counts[r_max - r_min] == m:
        sentinel = valid_range(bits, 0.001)[1]
        return EstimateReport(sentinel, math.inf, converged=False, flag=FLAG_ALL_MAX)

    values = np.arange(nbins) + r_min
    init = m / float(np.dot(counts, 2.0 ** (-values.astype(np.float64))))
    C0 = (m - 1) * init / m if m > 1 else init

    C = C0
    for it in range(1, MAX_ITERATIONS + 1):
        f, fp = score_terms(C, counts, bits)
        if fp == 0.0:
            break
        step = f / fp
        C_next = C - step
        halvings = 0
        while (not (C_next > 0.0 and math.isfinite(C_next))) and halvings < _MAX_HALVINGS:
            step *= 0.5
            C_next = C - step
            halvings += 1
        if not (C_next > 0.0 and math.isfinite(C_next)):
            return _bisect(counts, bits, C0, it)
        if abs(C_next - C) / C_next < REL_TOL:
            return EstimateReport(C_next, _variance_at(C_next, counts, bits), iterations=it)
        C = C_next

    fp = score_terms(C, counts, bits)[1]
    return EstimateReport(
        C, -1.0 / fp if fp < 0.0 else math.inf,
        iterations=MAX_ITERATIONS, converged=False, flag=FLAG_NOT_CONVERGED,
    )


def _variance_at(C: float, counts: np.ndarray, bits: int) -> float:
    fp = score_terms(C, counts, bits)[1]
    return -1.0 / fp if fp < 0.0 else math.inf


def _bisect(counts: np.ndarray, bits: int, C0: float, used: int) -> EstimateReport:
    """Geometric bisection fallback around the closed-form initial guess."""
    lo, hi = C0 / _BRACKET_SPAN, C0 * _BRACKET_SPAN
    it = used
    if not (score_terms(lo, counts, bits)[0] > 0.0 > score_terms(hi, counts, bits)[0]):
        return EstimateReport(
            C0, _variance_at(C0, counts, bits),
            iterations=it, converged=False, flag=FLAG_NOT_CONVERGED,
        )
    while hi / lo > 1.0 + REL_TOL and it < MAX_ITERATIONS:
        mid = math.sqrt(lo * hi)
        if score_terms(mid, counts, bits)[0] > 0.0:
            lo = mid
        else:
            hi = mid
        it += 1
    C = math.sqrt(lo * hi)
    if hi / lo <= 1.0 + REL_TOL:
        return EstimateReport(C, _variance_at(C, counts, bits), iterations=it)
    return EstimateReport(
        C, _variance_at(C, counts, bits),
        iterations=it, converged=False, flag=FLAG_NOT_CONVERGED,
    )
