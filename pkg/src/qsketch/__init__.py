"""Weighted cardinality sketches over data streams.

Estimate the sum of weights over *distinct* stream elements in one pass and
sublinear memory.  Four sketches share one keyed-randomness substrate:

- LmSketch / FastGmSketch: float64 min-register baselines (identical in
  distribution; FastGM generates per-element values ascending so it can
  stop early).
- QSketch: the same information quantized to signed 4-8 bit registers,
  recovered by Newton-solving the truncated register likelihood.
- QSketchDyn: one register per element and a histogram-corrected running
  total, giving an O(1) estimate read at any point in the stream.

Kernel backend (compiled vs pure NumPy) is chosen by QSKETCH_BACKEND; see
qsketch.kernels.
"""

from .baselines import FastGmSketch, LmSketch
from .expgen import AscendingExpGenerator
from .metrics import aare, rrmse
from .mle import score_terms, solve, valid_range
from .packed import PackedRegisters, register_bounds
from .qdyn import QSketchDyn
from .qsketch import QSketch, quantize
from .randomness import ElementRandomStream, indexed_uniform, register_choice
from .reports import (
    FLAG_ALL_MAX,
    FLAG_ALL_MIN,
    FLAG_NOT_CONVERGED,
    FLAG_NOT_SATURATED,
    FLAG_OK,
    EstimateReport,
)
from .streams import (
    Stream,
    StreamSpec,
    WeightedElement,
    generate,
    load_csv,
    true_cardinality,
    write_csv,
)

__all__ = [
    "AscendingExpGenerator",
    "ElementRandomStream",
    "EstimateReport",
    "FLAG_ALL_MAX",
    "FLAG_ALL_MIN",
    "FLAG_NOT_CONVERGED",
    "FLAG_NOT_SATURATED",
    "FLAG_OK",
    "FastGmSketch",
    "LmSketch",
    "PackedRegisters",
    "QSketch",
    "QSketchDyn",
    "Stream",
    "StreamSpec",
    "WeightedElement",
    "aare",
    "generate",
    "indexed_uniform",
    "load_csv",
    "quantize",
    "register_bounds",
    "register_choice",
    "rrmse",
    "score_terms",
    "solve",
    "true_cardinality",
    "valid_range",
    "write_csv",
]

__version__ = "0.1.0"
