"""Streaming QSketch variant with an always-current estimate.

Instead of solving for the cardinality on demand, this sketch maintains a
running total: each element hashes to one register (one draw instead of m),
and whenever its quantized value raises that register, the running estimate
grows by weight / q, where q is the probability that an element of this
weight would have changed *some* register of the pre-update sketch.  The
change probability comes from a count histogram of register values, making
each update O(2**bits) in the worst case and O(1) when nothing changes —
which is the common case once registers fill up.

q is evaluated against the sketch state *before* the element is applied;
conditioning on the prior state is what makes the increment an unbiased
correction (evaluating after the write is measurably biased upward).
"""

from __future__ import annotations

import math
import struct

import numpy as np

from . import kernels
from ._hash import MASK64, key_to_u64
from .baselines import _check_weight, _coerce_batch
from .packed import PackedRegisters

_MAGIC = b"QSKD"
_HEADER = struct.Struct("<4sIIQI")


class QSketchDyn:
    """Packed registers + value histogram + running weighted-cardinality sum.

    The running estimate is monotone non-decreasing and readable in O(1).
    Construct with track_variance=True to also accumulate the per-update
    variance proxy weight**2 * (1 - q) / q; tracking forces the O(2**bits)
    q computation on every update (not just on register changes), and it
    treats every call as a first occurrence, so feed it duplicate-free
    streams.  The running estimate itself is identical either way.
    """

    __slots__ = ("m", "bits", "seed", "track_variance", "registers", "histogram", "_state")

    def __init__(self, m: int, seed: int, bits: int = 8, track_variance: bool = False):
        self.registers = PackedRegisters(m, bits)
        self.m = m
        self.bits = bits
        self.seed = int(seed) & MASK64
        self.track_variance = bool(track_variance)
        # histogram[k] counts registers holding value k + r_min; a fresh
        # sketch has all m registers at r_min.
        self.histogram = np.zeros(1 << bits, dtype=np.int64)
        self.histogram[0] = m
        self._state = np.zeros(2, dtype=np.float64)  # [running estimate, variance acc]

    @property
    def r_min(self) -> int:
        return self.registers.r_min

    @property
    def r_max(self) -> int:
        return self.registers.r_max

    @property
    def variance_accumulator(self) -> float:
        if not self.track_variance:
            raise RuntimeError("sketch was constructed with track_variance=False")
        return float(self._state[1])

    def change_probability(self, weight: float) -> float:
        """Probability that an element of this weight changes some register.

        Computed from the histogram as the mean over registers of
        P(quantized draw exceeds current value) = 1 - exp(-w * 2**-(v+1)),
        evaluated per distinct value with expm1 so it stays strictly
        positive whenever any register can still grow.
        """
        w = _check_weight(weight)
        r_min = self.r_min
        counts = self.histogram
        s = 0.0
        for k in range(counts.shape[0]):
            cnt = int(counts[k])
            if cnt > 0:
                s += cnt * -math.expm1(-w * 2.0 ** (-(k + r_min + 1.0)))
        return s / self.m

    def update(self, key, weight: float) -> float:
        """Apply one element; returns the (possibly unchanged) running estimate."""
        return self.update_many([key_to_u64(key)], [_check_weight(weight)])

    def update_many(self, keys, weights) -> float:
        k, w = _coerce_batch(keys, weights)
        if k.size:
            kernels.qdyn_update_many(
                self.registers.words, self.histogram, self.m, self.bits,
                np.uint64(self.seed), k, w, self._state, self.track_variance,
            )
        return float(self._state[0])

    def estimate(self) -> float:
        """Current running estimate; O(1)."""
        return float(self._state[0])

    def register_values(self) -> np.ndarray:
        return self.registers.to_array()

    def to_bytes(self) -> bytes:
        """Header (magic, m, bits, seed, word count) + packed words +
        histogram (u32 each) + running estimate (f64), little-endian."""
        words = self.registers.words
        return (
            _HEADER.pack(_MAGIC, self.m, self.bits, self.seed, words.size)
            + words.astype("<u4").tobytes()
            + self.histogram.astype("<u4").tobytes()
            + struct.pack("<d", float(self._state[0]))
        )

    @classmethod
    def from_bytes(cls, blob: bytes) -> "QSketchDyn":
        magic, m, bits, seed, n_words = _HEADER.unpack_from(blob, 0)
        if magic != _MAGIC:
            raise ValueError("not a QSketchDyn serialization")
        nbins = 1 << bits
        expected = _HEADER.size + 4 * n_words + 4 * nbins + 8
        if len(blob) != expected:
            raise ValueError(f"serialization length {len(blob)} != expected {expected}")
        sketch = cls(m, seed, bits=bits)
        if n_words != sketch.registers.words.size:
            raise ValueError("word count inconsistent with m and bits")
        off = _HEADER.size
        sketch.registers.words[:] = np.frombuffer(blob, dtype="<u4", count=n_words, offset=off)
        off += 4 * n_words
        hist = np.frombuffer(blob, dtype="<u4", count=nbins, offset=off).astype(np.int64)
        if int(hist.sum()) != m:
            raise ValueError("histogram does not cover exactly m registers")
        sketch.histogram[:] = hist
        off += 4 * nbins
        sketch._state[0] = struct.unpack_from("<d", blob, off)[0]
        return sketch
