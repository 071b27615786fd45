"""Command-line interface: stream generation, accuracy runs, benchmarks, diagnostics."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import kernels
from .harness import (
    SKETCH_KINDS,
    TrialConfig,
    run_accuracy,
    run_estimation_time,
    run_throughput,
    run_truncation_diagnostic,
    run_variance_diagnostic,
)
from .streams import DISTRIBUTIONS, StreamSpec, generate, load_csv, write_csv


def _add_synthetic_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dist", choices=DISTRIBUTIONS, help="synthetic weight distribution")
    parser.add_argument("--n", type=int, help="number of distinct elements")
    parser.add_argument(
        "--params", type=str, default="",
        help="comma-separated distribution parameters "
             "(uniform: low,high; gauss: mean,std; gamma: shape,scale; constant: weight)",
    )
    parser.add_argument("--dup", type=int, default=1,
                        help="emit each element this many times, shuffled (default 1)")


def _parse_params(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"--params must be comma-separated numbers, got {text!r}") from None


def _spec_from_args(args, seed: int) -> StreamSpec:
    if args.dist is None or args.n is None:
        raise ValueError("synthetic streams need both --dist and --n")
    return StreamSpec(
        distribution=args.dist, n=args.n, seed=seed,
        params=_parse_params(args.params), duplication_factor=args.dup,
    )


def _resolve_streams(args, seed: int) -> list:
    """One stream from --input FILE or --dist/--n; a directory of .csv files
    becomes multi-stream mode."""
    if args.input is not None:
        path = Path(args.input)
        if path.is_dir():
            files = sorted(path.glob("*.csv"))
            if not files:
                raise ValueError(f"no .csv stream files in directory {path}")
            return [load_csv(f) for f in files]
        return [load_csv(path)]
    return [generate(_spec_from_args(args, seed))]


def _cmd_gen(args) -> int:
    spec = _spec_from_args(args, args.seed)
    stream = generate(spec)
    write_csv(stream, args.out)
    print(f"wrote {len(stream)} elements ({spec.n} distinct) to {args.out}")
    return 0


def _cmd_run(args) -> int:
    config = TrialConfig(sketch=args.sketch, m=args.m, bits=args.bits,
                         runs=args.runs, base_seed=args.seed)
    streams = _resolve_streams(args, args.seed)
    result = run_accuracy(config, streams, out_csv=args.out)
    line = (f"{args.sketch} m={args.m} runs={args.runs} "
            f"mean={result.mean:.6g} stddev={result.stddev:.6g}")
    if result.rrmse is not None:
        line += f" rrmse={result.rrmse:.6g}"
    if result.aare is not None:
        line += f" aare={result.aare:.6g}"
    print(line)
    print(f"wrote {args.out}")
    return 0


def _cmd_bench(args) -> int:
    config = TrialConfig(sketch=args.sketch, m=args.m, bits=args.bits,
                         runs=1, base_seed=args.seed)
    streams = _resolve_streams(args, args.seed)
    if len(streams) != 1:
        raise ValueError("bench takes exactly one stream")
    stream = streams[0]
    if args.mode == "update":
        result = run_throughput(config, stream, repeats=args.repeats, out_csv=args.out)
        print(f"{args.sketch} m={args.m} backend={kernels.BACKEND} "
              f"update: {result.updates_per_second:,.0f} updates/s "
              f"(median of {result.repeats} over {result.n} elements)")
    else:
        result = run_estimation_time(config, stream, out_csv=args.out)
        print(f"{args.sketch} m={args.m} backend={kernels.BACKEND} "
              f"estimate: {result.median_seconds * 1e6:.3f} us "
              f"(median of {result.invocations})")
    print(f"wrote {args.out}")
    return 0


def _cmd_diag(args) -> int:
    if args.check == "truncation":
        result = run_truncation_diagnostic(
            bits=args.bits, epsilon=args.epsilon, cardinality=args.cardinality,
            samples=args.samples, seed=args.seed, out_csv=args.out,
        )
        print(f"truncation: min={result.fraction_min:.6g} max={result.fraction_max:.6g} "
              f"total={result.fraction_total:.6g} (bound {result.bound:.6g})")
    else:
        config = TrialConfig(sketch="qsketch-dyn", m=args.m, bits=args.bits,
                             runs=args.runs, base_seed=args.seed)
        streams = _resolve_streams(args, args.seed)
        if len(streams) != 1:
            raise ValueError("the variance diagnostic takes exactly one stream")
        result = run_variance_diagnostic(config, streams[0], out_csv=args.out)
        print(f"variance: empirical={result.empirical_variance:.6g} "
              f"accumulator={result.mean_accumulator:.6g} ratio={result.ratio:.6g}")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsketch",
        description="Weighted cardinality sketches: stream generation, accuracy runs, "
                    "benchmarks, and diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a synthetic stream to a CSV file")
    _add_synthetic_args(gen)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    run = sub.add_parser("run", help="accuracy runs over one stream or a directory of streams")
    run.add_argument("--sketch", choices=SKETCH_KINDS, required=True)
    run.add_argument("--m", type=int, required=True)
    run.add_argument("--bits", type=int, default=8)
    run.add_argument("--runs", type=int, required=True)
    run.add_argument("--seed", type=int, required=True)
    run.add_argument("--input", help="stream CSV file, or directory of .csv files")
    _add_synthetic_args(run)
    run.add_argument("--out", required=True)
    run.set_defaults(func=_cmd_run)

    bench = sub.add_parser("bench", help="measure update throughput or estimation time")
    bench.add_argument("--sketch", choices=SKETCH_KINDS, required=True)
    bench.add_argument("--m", type=int, required=True)
    bench.add_argument("--bits", type=int, default=8)
    bench.add_argument("--seed", type=int, required=True)
    bench.add_argument("--mode", choices=("update", "estimate"), required=True)
    bench.add_argument("--repeats", type=int, default=5)
    bench.add_argument("--input", help="stream CSV file")
    _add_synthetic_args(bench)
    bench.add_argument("--out", required=True)
    bench.set_defaults(func=_cmd_bench)

    diag = sub.add_parser("diag", help="quantization truncation / variance diagnostics")
    diag.add_argument("--check", choices=("truncation", "variance"), required=True)
    diag.add_argument("--bits", type=int, default=8)
    diag.add_argument("--seed", type=int, required=True)
    diag.add_argument("--out", required=True)
    # truncation flags
    diag.add_argument("--epsilon", type=float, default=0.001)
    diag.add_argument("--cardinality", type=float, help="true cardinality to probe")
    diag.add_argument("--samples", type=int, default=100_000)
    # variance flags
    diag.add_argument("--m", type=int, help="register count (variance check)")
    diag.add_argument("--runs", type=int, default=100)
    diag.add_argument("--input", help="stream CSV file (variance check)")
    _add_synthetic_args(diag)
    diag.set_defaults(func=_cmd_diag)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "diag":
            if args.check == "truncation" and args.cardinality is None:
                raise ValueError("diag --check truncation needs --cardinality")
            if args.check == "variance" and args.m is None:
                raise ValueError("diag --check variance needs --m")
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
