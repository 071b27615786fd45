"""Keyed randomness: deterministic per-element uniforms and draw streams.

Every sketch in this package replaces stored hash tables with recomputable
randomness: the draws for a stream element depend only on (seed, key), so
re-inserting an element replays the identical values and duplicates cannot
perturb sketch state.
"""

from __future__ import annotations

import math

from ._hash import MASK64, draw_bits, key_to_u64, stream_base, unit_from_bits


def indexed_uniform(seed: int, key: int, j: int) -> float:
    """Uniform in (0, 1) for register index ``j`` (1-based), keyed by element.

    Plays the role of the j-th hash function evaluated at the element: fixed
    (seed, key, j) always yields the same value.
    """
    if j < 1:
        raise ValueError(f"register index must be >= 1, got {j}")
    return unit_from_bits(draw_bits(stream_base(seed, key_to_u64(key)), j))


def register_choice(seed: int, key: int, m: int) -> int:
    """Deterministic register index in [1, m] for an element.

    Drawn from counter 0 of the element's stream, which no other consumer
    uses, so the chosen index is independent of the value draws.
    """
    if m < 1:
        raise ValueError(f"register count must be >= 1, got {m}")
    return 1 + draw_bits(stream_base(seed, key_to_u64(key)), 0) % m


class ElementRandomStream:
    """Replayable sequence of uniforms for one (seed, key) pair.

    The counter starts at 1 and advances by one per draw (counter 0 is
    reserved for :func:`register_choice`).  Counters 1..m coincide with
    :func:`indexed_uniform`, which is what lets sketches that consume the
    stream in order share hash values with sketches that address registers
    directly.
    """

    __slots__ = ("_base", "_counter")

    def __init__(self, seed: int, key: int | str | bytes):
        self._base = stream_base(seed, key_to_u64(key))
        self._counter = 1

    @property
    def counter(self) -> int:
        """Counter of the next draw (starts at 1)."""
        return self._counter

    def next_uniform(self) -> float:
        """Next uniform in (0, 1); advances the counter."""
        u = unit_from_bits(draw_bits(self._base, self._counter))
        self._counter = (self._counter + 1) & MASK64
        return u

    def rand_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive; consumes exactly one draw."""
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        v = lo + math.floor(self.next_uniform() * span)
        return hi if v > hi else v
