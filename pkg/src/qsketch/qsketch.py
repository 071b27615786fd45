"""Quantized-register sketch for weighted cardinality estimation.

QSketch stores, per register, the floored negative log2 of the minimum
exponential draw a baseline float sketch would hold, clamped to a signed
b-bit range — 4 to 8 bits per register instead of 64.  Updates generate each
element's values in ascending order (see expgen) so an element can stop as
soon as its quantized value cannot exceed the current register minimum.
Estimation runs Newton-Raphson on the truncated register likelihood (see
mle) over value counts, so it costs O(2**bits) per iteration.
"""

from __future__ import annotations

import math
import struct

import numpy as np

from . import kernels, mle
from ._hash import MASK64, key_to_u64
from .baselines import _check_weight, _coerce_batch
from .packed import PackedRegisters
from .reports import EstimateReport

_MAGIC = b"QSKR"
_HEADER = struct.Struct("<4sIIQI")


def quantize(r: float) -> int:
    """floor(-log2(r)) for a positive finite draw r."""
    if not (r > 0.0 and math.isfinite(r)):
        raise ValueError(f"draw must be positive and finite, got {r}")
    return math.floor(-math.log2(r))


def valid_range(bits: int, epsilon: float) -> tuple[float, float]:
    """Re-export of :func:`mle.valid_range` (documented there)."""
    return mle.valid_range(bits, epsilon)


class QSketch:
    """Packed b-bit register sketch with ascending-order early stopping.

    The packed state is a pure function of (seed, stream contents): updates
    are max-merges of quantized values, so duplicates are absorbed and
    element order is irrelevant.  Against a FastGmSketch built with the same
    seed, every register equals the clamped quantization of the float
    register — the sketch is the baseline observed through floor(-log2).
    """

    __slots__ = ("m", "bits", "seed", "early_stop", "registers")

    def __init__(self, m: int, seed: int, bits: int = 8, early_stop: bool = True):
        self.registers = PackedRegisters(m, bits)
        self.m = m
        self.bits = bits
        self.seed = int(seed) & MASK64
        self.early_stop = bool(early_stop)

    @property
    def r_min(self) -> int:
        return self.registers.r_min

    @property
    def r_max(self) -> int:
        return self.registers.r_max

    def update(self, key, weight: float) -> None:
        self.update_many([key_to_u64(key)], [_check_weight(weight)])

    def update_many(self, keys, weights) -> None:
        k, w = _coerce_batch(keys, weights)
        if k.size:
            kernels.qsketch_update_many(
                self.registers.words, self.m, self.bits,
                np.uint64(self.seed), k, w, self.early_stop,
            )

    def register_values(self) -> np.ndarray:
        return self.registers.to_array()

    def value_counts(self) -> np.ndarray:
        """Histogram of register values, indexed by value - r_min."""
        return np.bincount(self.register_values() - self.r_min, minlength=1 << self.bits)

    def likelihood_score(self, cardinality: float) -> tuple[float, float]:
        """(f, f') of the register log-likelihood at the given cardinality."""
        return mle.score_terms(cardinality, self.value_counts(), self.bits)

    def estimate(self) -> EstimateReport:
        """Newton-solved ML estimate; see :func:`mle.solve` for edge cases."""
        return mle.solve(self.value_counts(), self.bits)

    def to_bytes(self) -> bytes:
        """Header (magic, m, bits, seed, word count) + packed register words,
        all little-endian."""
        words = self.registers.words
        return _HEADER.pack(_MAGIC, self.m, self.bits, self.seed, words.size) + (
            words.astype("<u4").tobytes()
        )

    @classmethod
    def from_bytes(cls, blob: bytes) -> "QSketch":
        magic, m, bits, seed, n_words = _HEADER.unpack_from(blob, 0)
        if magic != _MAGIC:
            raise ValueError("not a QSketch serialization")
        expected = _HEADER.size + 4 * n_words
        if len(blob) != expected:
            raise ValueError(f"serialization length {len(blob)} != expected {expected}")
        sketch = cls(m, seed, bits=bits)
        words = np.frombuffer(blob, dtype="<u4", count=n_words, offset=_HEADER.size)
        if words.size != sketch.registers.words.size:
            raise ValueError("word count inconsistent with m and bits")
        sketch.registers.words[:] = words
        return sketch

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSketch):
            return NotImplemented
        return (
            self.m == other.m
            and self.bits == other.bits
            and self.seed == other.seed
            and self.registers == other.registers
        )
