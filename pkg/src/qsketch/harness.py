"""Benchmark harness: accuracy, throughput, and diagnostic runs with CSV output.

Results are deterministic given their configuration (timing fields aside):
sketch run r uses seed base_seed + r, streams are materialized once up
front, and CSV floats are written with full repr precision.
"""

from __future__ import annotations

import csv
import math
import statistics
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._hash import draw_bits_vec, stream_base_vec, unit_from_bits_vec
from .baselines import FastGmSketch, LmSketch
from .metrics import aare as _aare
from .metrics import rrmse as _rrmse
from .mle import valid_range
from .packed import register_bounds
from .qdyn import QSketchDyn
from .qsketch import QSketch
from .streams import Stream, true_cardinality

SKETCH_KINDS = ("lm", "fastgm", "qsketch", "qsketch-dyn")


def make_sketch(kind: str, m: int, seed: int, bits: int = 8):
    """Instantiate a sketch by CLI name."""
    if kind == "lm":
        return LmSketch(m, seed)
    if kind == "fastgm":
        return FastGmSketch(m, seed)
    if kind == "qsketch":
        return QSketch(m, seed, bits=bits)
    if kind == "qsketch-dyn":
        return QSketchDyn(m, seed, bits=bits)
    raise ValueError(f"unknown sketch kind {kind!r}; choose from {SKETCH_KINDS}")


def estimate_value(sketch) -> float:
    """Point estimate as a bare float for any sketch kind."""
    est = sketch.estimate()
    return est if isinstance(est, float) else est.estimate


@dataclass(frozen=True)
class TrialConfig:
    sketch: str
    m: int
    bits: int = 8
    runs: int = 1
    base_seed: int = 0

    def __post_init__(self):
        if self.sketch not in SKETCH_KINDS:
            raise ValueError(f"unknown sketch kind {self.sketch!r}; choose from {SKETCH_KINDS}")
        if self.m < 1:
            raise ValueError(f"register count must be >= 1, got {self.m}")
        if self.runs < 1:
            raise ValueError(f"run count must be >= 1, got {self.runs}")
        register_bounds(self.bits)


@dataclass
class AccuracyResult:
    config: TrialConfig
    labels: list[str]
    truths: np.ndarray        # per stream
    estimates: np.ndarray     # shape (runs, n_streams)
    rrmse: float | None       # single-stream mode
    aare: float | None        # multi-stream mode
    mean: float
    stddev: float


def run_accuracy(config: TrialConfig, streams, out_csv=None) -> AccuracyResult:
    """Estimate each stream with `runs` independently seeded sketches.

    Single-stream mode reports the cross-run RRMSE against the stream's true
    cardinality; multi-stream mode reports the AARE across streams, averaged
    over runs.  An empty stream has truth 0 and its relative error is
    defined as 0 when the estimate is exactly 0, else infinity.
    """
    if isinstance(streams, Stream):
        streams = [streams]
    if not streams:
        raise ValueError("need at least one stream")
    truths = np.array([true_cardinality(s) for s in streams])
    estimates = np.empty((config.runs, len(streams)))
    for r in range(config.runs):
        for si, stream in enumerate(streams):
            sketch = make_sketch(config.sketch, config.m, config.base_seed + r, config.bits)
            sketch.update_many(stream.keys, stream.weights)
            estimates[r, si] = estimate_value(sketch)

    single = len(streams) == 1
    rrmse_val = _rrmse(estimates[:, 0], truths[0]) if single and truths[0] > 0 else None
    if single and truths[0] == 0:
        rrmse_val = 0.0 if np.all(estimates == 0.0) else math.inf
    aare_val = None
    if not single:
        per_run = [
            _aare(list(zip(estimates[r], truths))) for r in range(config.runs)
        ]
        aare_val = float(np.mean(per_run))
    result = AccuracyResult(
        config=config,
        labels=[s.label or f"stream{i}" for i, s in enumerate(streams)],
        truths=truths,
        estimates=estimates,
        rrmse=rrmse_val,
        aare=aare_val,
        mean=float(estimates.mean()),
        stddev=float(estimates.std(ddof=1)) if estimates.size > 1 else 0.0,
    )
    if out_csv is not None:
        write_accuracy_csv(result, out_csv)
    return result


def write_accuracy_csv(result: AccuracyResult, path) -> None:
    """Rows `run_index,stream,estimate,truth,rel_error`, then one `# summary:` line."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run_index", "stream", "estimate", "truth", "rel_error"])
        for r in range(result.estimates.shape[0]):
            for si, label in enumerate(result.labels):
                est, truth = result.estimates[r, si], result.truths[si]
                if truth > 0:
                    rel = (est - truth) / truth
                else:
                    rel = 0.0 if est == 0.0 else math.inf
                writer.writerow([r, label, repr(float(est)), repr(float(truth)), repr(float(rel))])
        parts = [f"mean={result.mean!r}", f"stddev={result.stddev!r}"]
        if result.rrmse is not None:
            parts.insert(0, f"rrmse={result.rrmse!r}")
        if result.aare is not None:
            parts.insert(0, f"aare={result.aare!r}")
        fh.write("# summary: " + " ".join(parts) + "\n")


@dataclass
class ThroughputResult:
    config: TrialConfig
    n: int
    repeats: int
    median_seconds: float
    updates_per_second: float


def run_throughput(config: TrialConfig, stream: Stream, repeats: int = 5,
                   out_csv=None) -> ThroughputResult:
    """Median updates/second over `repeats` single-threaded bulk updates.

    The stream arrays are materialized before timing and kernels are warmed
    so compilation never lands inside a measurement; each repeat feeds a
    fresh sketch.
    """
    if len(stream) == 0:
        raise ValueError("cannot measure throughput on an empty stream")
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    kernels.warmup()
    keys = np.ascontiguousarray(stream.keys, dtype=np.uint64)
    weights = np.ascontiguousarray(stream.weights, dtype=np.float64)
    times = []
    for _ in range(repeats):
        sketch = make_sketch(config.sketch, config.m, config.base_seed, config.bits)
        start = time.perf_counter()
        sketch.update_many(keys, weights)
        times.append(time.perf_counter() - start)
    med = statistics.median(times)
    result = ThroughputResult(config, len(stream), repeats, med, len(stream) / med)
    if out_csv is not None:
        _write_bench_csv(result, "update", path=out_csv)
    return result


@dataclass
class EstimationTimeResult:
    config: TrialConfig
    n: int
    invocations: int
    median_seconds: float


def run_estimation_time(config: TrialConfig, stream: Stream, invocations: int = 100,
                        out_csv=None) -> EstimationTimeResult:
    """Median wall-clock seconds per estimate call on a populated sketch.

    Each invocation is timed individually with perf_counter_ns; for
    sub-microsecond reads (qsketch-dyn) the timer floor inflates the result
    slightly, which only makes speedup claims against it conservative.
    """
    if invocations < 1:
        raise ValueError(f"invocations must be >= 1, got {invocations}")
    sketch = make_sketch(config.sketch, config.m, config.base_seed, config.bits)
    sketch.update_many(stream.keys, stream.weights)
    estimate_value(sketch)  # warm any lazy paths
    times = []
    for _ in range(invocations):
        start = time.perf_counter_ns()
        sketch.estimate()
        times.append(time.perf_counter_ns() - start)
    med = statistics.median(times) * 1e-9
    result = EstimationTimeResult(config, len(stream), invocations, med)
    if out_csv is not None:
        _write_bench_csv(result, "estimate", path=out_csv)
    return result


def _write_bench_csv(result, mode: str, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["sketch", "backend", "mode", "m", "bits", "n", "repeats",
             "median_seconds", "updates_per_second"]
        )
        cfg = result.config
        if mode == "update":
            reps, ups = result.repeats, repr(result.updates_per_second)
        else:
            reps, ups = result.invocations, ""
        writer.writerow(
            [cfg.sketch, kernels.BACKEND, mode, cfg.m, cfg.bits, result.n,
             reps, repr(result.median_seconds), ups]
        )


@dataclass
class TruncationResult:
    bits: int
    epsilon: float
    cardinality: float
    samples: int
    fraction_min: float
    fraction_max: float
    fraction_total: float
    bound: float


def run_truncation_diagnostic(bits: int, epsilon: float, cardinality: float,
                              samples: int, seed: int, out_csv=None) -> TruncationResult:
    """Fraction of single-register observations that clamp at r_min or r_max.

    Draws `samples` quantized exponential register values at the given true
    cardinality (one synthetic element per register observation) and counts
    how many land at or beyond the storable range.  Inside
    valid_range(bits, epsilon) — endpoints included — the expected total is
    at most 2*epsilon; cardinalities outside the range are rejected.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    low, high = valid_range(bits, epsilon)
    if not low <= cardinality <= high:
        raise ValueError(
            f"cardinality {cardinality} outside valid_range(bits={bits}, "
            f"epsilon={epsilon}) = [{low}, {high}]"
        )
    r_min, r_max = register_bounds(bits)
    bases = stream_base_vec(seed, np.arange(samples, dtype=np.uint64))
    u = unit_from_bits_vec(draw_bits_vec(bases, 1))
    y = np.floor(-np.log2(-np.log(u) / cardinality))
    frac_min = float(np.mean(y <= r_min))
    frac_max = float(np.mean(y >= r_max))
    result = TruncationResult(
        bits, epsilon, cardinality, samples,
        frac_min, frac_max, frac_min + frac_max, 2.0 * epsilon,
    )
    if out_csv is not None:
        with open(out_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["bits", "epsilon", "cardinality", "samples",
                 "fraction_min", "fraction_max", "fraction_total", "bound"]
            )
            writer.writerow(
                [bits, repr(epsilon), repr(cardinality), samples,
                 repr(frac_min), repr(frac_max), repr(result.fraction_total), repr(result.bound)]
            )
    return result


@dataclass
class VarianceResult:
    config: TrialConfig
    n: int
    truth: float
    empirical_variance: float
    mean_accumulator: float
    ratio: float


def run_variance_diagnostic(config: TrialConfig, stream: Stream,
                            out_csv=None) -> VarianceResult:
    """Cross-seed estimate variance vs the mean tracked variance accumulator.

    Runs the stream through `runs` variance-tracking qsketch-dyn instances;
    a healthy estimator keeps the ratio near 1.
    """
    if config.runs < 2:
        raise ValueError("variance diagnostic needs at least 2 runs")
    estimates = []
    accumulators = []
    for r in range(config.runs):
        sketch = QSketchDyn(config.m, config.base_seed + r, bits=config.bits,
                            track_variance=True)
        sketch.update_many(stream.keys, stream.weights)
        estimates.append(sketch.estimate())
        accumulators.append(sketch.variance_accumulator)
    emp = float(np.var(estimates, ddof=1))
    mean_acc = float(np.mean(accumulators))
    result = VarianceResult(
        config, len(stream), true_cardinality(stream), emp, mean_acc,
        emp / mean_acc if mean_acc > 0 else math.inf,
    )
    if out_csv is not None:
        with open(out_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["sketch", "m", "bits", "runs", "n", "truth",
                 "empirical_variance", "mean_accumulator", "ratio"]
            )
            writer.writerow(
                ["qsketch-dyn", config.m, config.bits, config.runs, result.n,
                 repr(result.truth), repr(emp), repr(mean_acc), repr(result.ratio)]
            )
    return result
