"""Compare the compiled (numba) and pure-numpy kernel backends head to head.

Feeds the same pre-materialized stream through each backend's update kernels
and reports the median wall-clock time per bulk update.  The numpy backend is
the correctness fallback, not a performance target, so expect large gaps on
the per-element kernels; the point of the table is to quantify them.

Usage:
    python benchmarks/backend_bench.py [--n 20000] [--m 256] [--bits 8]
                                       [--repeats 3] [--seed 1] [--out FILE.csv]
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time

import numpy as np

from qsketch.kernels import numpy_backend

try:
    from qsketch.kernels import numba_backend
except ImportError:
    numba_backend = None

KINDS = ("lm", "fastgm", "qsketch", "qsketch-dyn")


def run_update(mod, kind, m, bits, seed, keys, weights):
    """One bulk update on a fresh sketch state; returns elapsed seconds."""
    seed = np.uint64(seed)
    if kind == "lm":
        registers = np.full(m, np.inf)
        start = time.perf_counter()
        mod.lm_update_many(registers, seed, keys, weights)
    elif kind == "fastgm":
        registers = np.full(m, np.inf)
        start = time.perf_counter()
        mod.fastgm_update_many(registers, seed, keys, weights, True)
    elif kind == "qsketch":
        words = np.zeros(-(-m // (32 // bits)), dtype=np.uint32)
        start = time.perf_counter()
        mod.qsketch_update_many(words, m, bits, seed, keys, weights, True)
    else:
        words = np.zeros(-(-m // (32 // bits)), dtype=np.uint32)
        histogram = np.zeros(1 << bits, dtype=np.int64)
        histogram[0] = m
        state = np.zeros(2)
        start = time.perf_counter()
        mod.qdyn_update_many(words, histogram, m, bits, seed, keys, weights, state, False)
    return time.perf_counter() - start


def measure(mod, kind, m, bits, seed, keys, weights, repeats):
    run_update(mod, kind, m, bits, seed, keys[:64], weights[:64])  # warm/compile
    times = [run_update(mod, kind, m, bits, seed, keys, weights) for _ in range(repeats)]
    return statistics.median(times)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=20_000)
    parser.add_argument("--m", type=int, default=256)
    parser.add_argument("--bits", type=int, default=8)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", help="also write results as CSV")
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    keys = rng.integers(0, 2**64, args.n, dtype=np.uint64)
    weights = np.exp(rng.uniform(-2.0, 2.0, args.n))

    backends = [("numpy", numpy_backend)]
    if numba_backend is not None:
        backends.insert(0, ("numba", numba_backend))
    else:
        print("numba backend unavailable; timing numpy only", file=sys.stderr)

    rows = []
    for kind in KINDS:
        medians = {}
        for name, mod in backends:
            med = measure(mod, kind, args.m, args.bits, args.seed, keys, weights, args.repeats)
            medians[name] = med
            rows.append({
                "sketch": kind, "backend": name, "n": args.n, "m": args.m,
                "bits": args.bits, "repeats": args.repeats,
                "median_seconds": med, "updates_per_second": args.n / med,
            })
        if "numba" in medians:
            speedup = medians["numpy"] / medians["numba"]
            extra = f"  numba speedup {speedup:8.1f}x"
        else:
            extra = ""
        timing = "  ".join(
            f"{name}: {medians[name] * 1e3:9.2f} ms ({args.n / medians[name]:12,.0f} updates/s)"
            for name, _ in backends
        )
        print(f"{kind:<12}{timing}{extra}")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
