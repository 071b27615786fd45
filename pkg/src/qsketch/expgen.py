"""Ascending generation of a weighted element's m exponential values.

Instead of drawing m independent EXP(w) values and shuffling, the generator
emits them smallest-first: spacings between consecutive order statistics of
m exponentials are themselves exponential with rate w*(m-j+1), and a
Fisher-Yates step run incrementally assigns each value its register position.
Per position the emitted value is distributed EXP(w), exactly as if register
j had drawn -ln(h_j(x))/w directly, but consumers can stop early once the
running value can no longer change their state.
"""

from __future__ import annotations

import math

from .randomness import ElementRandomStream


class AscendingExpGenerator:
    """Ascending (value, register_position) pairs for one weighted element.

    Values strictly increase; the positions emitted over a full run form an
    exact permutation of 1..m.  All draws come from the element's keyed
    stream, so the sequence is a pure function of (seed, key, weight, m).
    """

    __slots__ = ("_stream", "_weight", "_m", "_perm", "_value", "_step")

    def __init__(self, seed: int, key: int | str | bytes, weight: float, m: int):
        if not (weight > 0.0 and math.isfinite(weight)):
            raise ValueError(f"weight must be positive and finite, got {weight}")
        if m < 1:
            raise ValueError(f"register count must be >= 1, got {m}")
        self._stream = ElementRandomStream(seed, key)
        self._weight = weight
        self._m = m
        self._perm = list(range(1, m + 1))
        self._value = 0.0
        self._step = 0

    @property
    def steps_taken(self) -> int:
        return self._step

    def next_ascending(self) -> tuple[float, int]:
        """Next (value, position) pair; raises StopIteration after m steps."""
        j = self._step + 1
        if j > self._m:
            raise StopIteration
        u = self._stream.next_uniform()
        self._value += -math.log(u) / (self._weight * (self._m - j + 1))
        k = self._stream.rand_int(j, self._m)
        perm = self._perm
        perm[j - 1], perm[k - 1] = perm[k - 1], perm[j - 1]
        self._step = j
        return self._value, perm[j - 1]

    def __iter__(self):
        return self

    def __next__(self) -> tuple[float, int]:
        return self.next_ascending()
