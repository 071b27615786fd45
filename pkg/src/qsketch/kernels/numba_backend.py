"""Compiled update kernels.

Semantics are defined by the pure-Python reference paths (randomness.py,
expgen.py) and by kernels/numpy_backend.py; this module reproduces them with
numba for throughput.  Scalar np.log/np.log2/np.expm1 inside @njit lower to
the same libm calls the reference uses via math.*, so the quantized sketches
(fastgm, qsketch, qsketch-dyn) produce bit-identical state under either
backend.  All hash arithmetic stays in uint64 — mixing signed ints would
silently promote to float64 and destroy the bit patterns.
"""

from __future__ import annotations

import numba as nb
import numpy as np

NAME = "numba"

_U_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_U_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_U_MIX_B = np.uint64(0x94D049BB133111EB)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U12 = np.uint64(12)
_UNIT_SCALE = 2.0**-52

# y values far outside any storable register range, used when the raw
# exponential under/overflows float64 (possible only for extreme weights).
_Y_HUGE = np.int64(1) << 40


@nb.njit(inline="always")
def _mix(z):
    z = (z ^ (z >> _U30)) * _U_MIX_A
    z = (z ^ (z >> _U27)) * _U_MIX_B
    return z ^ (z >> _U31)


@nb.njit(inline="always")
def _base(seed, key):
    return _mix(_mix(seed ^ _U_GOLDEN) ^ key)


@nb.njit(inline="always")
def _draw(base, counter):
    return _mix(base + counter * _U_GOLDEN)


@nb.njit(inline="always")
def _unit(h):
    return (np.float64(h >> _U12) + 0.5) * _UNIT_SCALE


@nb.njit(inline="always")
def _quantize_raw(r):
    """floor(-log2(r)) with under/overflow guarded by out-of-range sentinels."""
    if r > 0.0 and np.isfinite(r):
        return np.int64(np.floor(-np.log2(r)))
    if r == 0.0:
        return _Y_HUGE
    return -_Y_HUGE


@nb.njit(inline="always")
def _pk_get(words, bits, per_word, i):
    sh = np.uint32((i % per_word) * bits)
    mask = np.uint32((1 << bits) - 1)
    return np.int64((words[i // per_word] >> sh) & mask)


@nb.njit(inline="always")
def _pk_set(words, bits, per_word, i, raw):
    wi = i // per_word
    sh = np.uint32((i % per_word) * bits)
    mask = np.uint32((1 << bits) - 1)
    words[wi] = (words[wi] & ~(mask << sh)) | (np.uint32(raw) << sh)


@nb.njit(inline="always")
def _max_finite(registers):
    r = registers[0]
    for t in range(1, registers.shape[0]):
        if registers[t] > r:
            r = registers[t]
    return r


@nb.njit(cache=True)
def lm_update_many(registers, seed, keys, weights):
    m = registers.shape[0]
    for i in range(keys.shape[0]):
        base = _base(seed, keys[i])
        w = weights[i]
        for j in range(1, m + 1):
            u = _unit(_draw(base, np.uint64(j)))
            r = -np.log(u) / w
            if r < registers[j - 1]:
                registers[j - 1] = r


@nb.njit(cache=True)
def fastgm_update_many(registers, seed, keys, weights, early_stop):
    m = registers.shape[0]
    filled = 0
    for t in range(m):
        if np.isfinite(registers[t]):
            filled += 1
    r_star = _max_finite(registers) if filled == m else np.inf
    perm = np.empty(m, np.int64)
    for i in range(keys.shape[0]):
        base = _base(seed, keys[i])
        w = weights[i]
        for t in range(m):
            perm[t] = t + 1
        r = 0.0
        c = 1
        for j in range(1, m + 1):
            u = _unit(_draw(base, np.uint64(c)))
            c += 1
            r += -np.log(u) / (w * (m - j + 1))
            if early_stop and filled == m and r > r_star:
                break
            u2 = _unit(_draw(base, np.uint64(c)))
            c += 1
            k = j + np.int64(u2 * (m - j + 1))
            if k > m:
                k = m
            tmp = perm[j - 1]
            perm[j - 1] = perm[k - 1]
            perm[k - 1] = tmp
            p = perm[j - 1] - 1
            old = registers[p]
            if r < old:
                registers[p] = r
                if not np.isfinite(old):
                    filled += 1
                    if filled == m:
                        r_star = _max_finite(registers)
                elif filled == m and old == r_star:
                    r_star = _max_finite(registers)


@nb.njit(cache=True)
def qsketch_update_many(words, m, bits, seed, keys, weights, early_stop):
    per_word = 32 // bits
    r_max = (1 << (bits - 1)) - 1
    r_min = -r_max
    j_star = 0
    min_raw = _pk_get(words, bits, per_word, 0)
    for t in range(1, m):
        raw = _pk_get(words, bits, per_word, t)
        if raw < min_raw:
            min_raw = raw
            j_star = t
    perm = np.empty(m, np.int64)
    for i in range(keys.shape[0]):
        base = _base(seed, keys[i])
        w = weights[i]
        for t in range(m):
            perm[t] = t + 1
        r = 0.0
        c = 1
        for j in range(1, m + 1):
            u = _unit(_draw(base, np.uint64(c)))
            c += 1
            r += -np.log(u) / (w * (m - j + 1))
            y = _quantize_raw(r)
            if early_stop and y <= min_raw + r_min:
                break
            u2 = _unit(_draw(base, np.uint64(c)))
            c += 1
            k = j + np.int64(u2 * (m - j + 1))
            if k > m:
                k = m
            tmp = perm[j - 1]
            perm[j - 1] = perm[k - 1]
            perm[k - 1] = tmp
            p = perm[j - 1] - 1
            yc = y
            if yc > r_max:
                yc = r_max
            elif yc < r_min:
                yc = r_min
            raw_new = yc - r_min
            if raw_new > _pk_get(words, bits, per_word, p):
                _pk_set(words, bits, per_word, p, raw_new)
                if p == j_star:
                    j_star = 0
                    min_raw = _pk_get(words, bits, per_word, 0)
                    for t in range(1, m):
                        raw = _pk_get(words, bits, per_word, t)
                        if raw < min_raw:
                            min_raw = raw
                            j_star = t


@nb.njit(cache=True)
def qdyn_update_many(words, histogram, m, bits, seed, keys, weights, state, track_variance):
    per_word = 32 // bits
    r_max = (1 << (bits - 1)) - 1
    r_min = -r_max
    nbins = 1 << bits
    scale = np.empty(nbins, np.float64)
    for k in range(nbins):
        scale[k] = 2.0 ** (-(k + r_min + 1.0))
    fm = np.float64(m)
    for i in range(keys.shape[0]):
        base = _base(seed, keys[i])
        w = weights[i]
        j = np.int64(_draw(base, np.uint64(0)) % np.uint64(m))
        u = _unit(_draw(base, np.uint64(j + 1)))
        y = _quantize_raw(-np.log(u) / w)
        if y > r_max:
            y = r_max
        raw_old = _pk_get(words, bits, per_word, j)
        changes = y - r_min > raw_old
        if changes or track_variance:
            s = 0.0
            for k in range(nbins):
                cnt = histogram[k]
                if cnt > 0:
                    s += cnt * -np.expm1(-w * scale[k])
            q = s / fm
            if track_variance:
                state[1] += w * w * (1.0 - q) / q
            if changes:
                histogram[raw_old] -= 1
                histogram[y - r_min] += 1
                _pk_set(words, bits, per_word, j, y - r_min)
                state[0] += w / q
