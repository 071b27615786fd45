"""64-bit mixing primitives shared by every randomness consumer.

All keyed randomness in this package derives from one finalizer-style bit
mixer applied to combinations of (seed, key, counter).  The scalar functions
here operate on plain Python ints masked to 64 bits and are the reference
semantics; the numba kernels and the vectorized helpers below reproduce them
bit for bit.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1

# Weyl increment used to derive independent draw counters from a stream base.
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Finalizer-style avalanche mix of a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


def stream_base(seed: int, key: int) -> int:
    """Combined 64-bit state for the (seed, key) draw sequence."""
    return mix64(mix64((seed & MASK64) ^ GOLDEN_GAMMA) ^ (key & MASK64))


def draw_bits(base: int, counter: int) -> int:
    """The counter-th 64-bit draw of the sequence rooted at ``base``."""
    return mix64((base + counter * GOLDEN_GAMMA) & MASK64)


def unit_from_bits(h: int) -> float:
    """Map 64 random bits to a float strictly inside (0, 1).

    Uses the top 52 bits plus a half-step offset, giving values in
    [2**-53, 1 - 2**-53].  Both endpoints of (0, 1) are unreachable, so
    log(u) and log1p(-u) are always finite.
    """
    return ((h >> 12) + 0.5) * 2.0**-52


def key_to_u64(key: int | str | bytes) -> int:
    """Canonicalize a stream key to an unsigned 64-bit integer.

    Integer keys are used directly (reduced mod 2**64); str/bytes keys are
    digested through BLAKE2b so arbitrary labels get well-spread ids.
    """
    if isinstance(key, bool):
        raise TypeError("bool is not a valid stream key")
    if isinstance(key, int):
        return key & MASK64
    if isinstance(key, str):
        key = key.encode("utf-8")
    if isinstance(key, bytes):
        return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
    raise TypeError(f"unsupported key type: {type(key).__name__}")


# --- vectorized counterparts (uint64 arrays wrap silently in numpy) ---

_U_MIX_A = np.uint64(_MIX_A)
_U_MIX_B = np.uint64(_MIX_B)
_U_GOLDEN = np.uint64(GOLDEN_GAMMA)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U12 = np.uint64(12)


def mix64_vec(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> _U30)) * _U_MIX_A
    z = (z ^ (z >> _U27)) * _U_MIX_B
    return z ^ (z >> _U31)


def stream_base_vec(seed: int, keys: np.ndarray) -> np.ndarray:
    seeded = np.uint64(mix64((seed & MASK64) ^ GOLDEN_GAMMA))
    return mix64_vec(np.asarray(keys, dtype=np.uint64) ^ seeded)


def draw_bits_vec(bases: np.ndarray, counter: int) -> np.ndarray:
    return mix64_vec(bases + np.uint64((counter * GOLDEN_GAMMA) & MASK64))


def unit_from_bits_vec(h: np.ndarray) -> np.ndarray:
    return ((h >> _U12).astype(np.float64) + 0.5) * 2.0**-52
