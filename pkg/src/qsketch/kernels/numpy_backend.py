"""Pure NumPy/Python update kernels (no compilation required).

Drop-in replacements for the numba kernels.  The quantized sketches walk
elements in Python using scalar math.* transcendentals — the same libm calls
the compiled kernels make — so their packed state matches the numba backend
bit for bit.  The unquantized baseline (lm) uses vectorized np.log for
tolerable fallback speed; vectorized transcendentals can differ from libm in
the last ulp, which only perturbs its float registers at relative ~1e-16.
"""

from __future__ import annotations

import math

import numpy as np

from .._hash import (
    GOLDEN_GAMMA,
    MASK64,
    draw_bits,
    mix64_vec,
    stream_base,
    unit_from_bits,
)

NAME = "numpy"

_U_GOLDEN = np.uint64(GOLDEN_GAMMA)
_U12 = np.uint64(12)
_UNIT_SCALE = 2.0**-52

_Y_HUGE = 1 << 40


def _quantize_raw(r: float) -> int:
    if r > 0.0 and math.isfinite(r):
        return math.floor(-math.log2(r))
    if r == 0.0:
        return _Y_HUGE
    return -_Y_HUGE


def _pk_get(words, bits, per_word, i):
    wi, slot = divmod(i, per_word)
    return (int(words[wi]) >> (slot * bits)) & ((1 << bits) - 1)


def _pk_set(words, bits, per_word, i, raw):
    wi, slot = divmod(i, per_word)
    sh = slot * bits
    mask = (1 << bits) - 1
    words[wi] = (int(words[wi]) & ~(mask << sh)) | (raw << sh)


def lm_update_many(registers, seed, keys, weights):
    m = registers.shape[0]
    counters = np.arange(1, m + 1, dtype=np.uint64) * _U_GOLDEN
    for i in range(keys.shape[0]):
        base = np.uint64(stream_base(int(seed), int(keys[i])))
        u = ((mix64_vec(base + counters) >> _U12).astype(np.float64) + 0.5) * _UNIT_SCALE
        np.minimum(registers, -np.log(u) / weights[i], out=registers)


def fastgm_update_many(registers, seed, keys, weights, early_stop):
    m = registers.shape[0]
    seed = int(seed)
    filled = int(np.isfinite(registers).sum())
    r_star = float(registers.max()) if filled == m else math.inf
    for i in range(keys.shape[0]):
        base = stream_base(seed, int(keys[i]))
        w = float(weights[i])
        perm = list(range(1, m + 1))
        r = 0.0
        c = 1
        for j in range(1, m + 1):
            u = unit_from_bits(draw_bits(base, c))
            c += 1
            r += -math.log(u) / (w * (m - j + 1))
            if early_stop and filled == m and r > r_star:
                break
            u2 = unit_from_bits(draw_bits(base, c))
            c += 1
            k = min(j + math.floor(u2 * (m - j + 1)), m)
            perm[j - 1], perm[k - 1] = perm[k - 1], perm[j - 1]
            p = perm[j - 1] - 1
            old = registers[p]
            if r < old:
                registers[p] = r
                if not math.isfinite(old):
                    filled += 1
                    if filled == m:
                        r_star = float(registers.max())
                elif filled == m and old == r_star:
                    r_star = float(registers.max())


def _scan_min(words, bits, per_word, m):
    j_star = 0
    min_raw = _pk_get(words, bits, per_word, 0)
    for t in range(1, m):
        raw = _pk_get(words, bits, per_word, t)
        if raw < min_raw:
            min_raw = raw
            j_star = t
    return j_star, min_raw


def qsketch_update_many(words, m, bits, seed, keys, weights, early_stop):
    per_word = 32 // bits
    r_max = (1 << (bits - 1)) - 1
    r_min = -r_max
    seed = int(seed)
    j_star, min_raw = _scan_min(words, bits, per_word, m)
    for i in range(keys.shape[0]):
        base = stream_base(seed, int(keys[i]))
        w = float(weights[i])
        perm = list(range(1, m + 1))
        r = 0.0
        c = 1
        for j in range(1, m + 1):
            u = unit_from_bits(draw_bits(base, c))
            c += 1
            r += -math.log(u) / (w * (m - j + 1))
            y = _quantize_raw(r)
            if early_stop and y <= min_raw + r_min:
                break
            u2 = unit_from_bits(draw_bits(base, c))
            c += 1
            k = min(j + math.floor(u2 * (m - j + 1)), m)
            perm[j - 1], perm[k - 1] = perm[k - 1], perm[j - 1]
            p = perm[j - 1] - 1
            raw_new = min(max(y, r_min), r_max) - r_min
            if raw_new > _pk_get(words, bits, per_word, p):
                _pk_set(words, bits, per_word, p, raw_new)
                if p == j_star:
                    j_star, min_raw = _scan_min(words, bits, per_word, m)


def qdyn_update_many(words, histogram, m, bits, seed, keys, weights, state, track_variance):
    per_word = 32 // bits
    r_max = (1 << (bits - 1)) - 1
    r_min = -r_max
    nbins = 1 << bits
    scale = [2.0 ** (-(k + r_min + 1.0)) for k in range(nbins)]
    seed = int(seed)
    for i in range(keys.shape[0]):
        base = stream_base(seed, int(keys[i]))
        w = float(weights[i])
        j = draw_bits(base, 0) % m
        u = unit_from_bits(draw_bits(base, j + 1))
        y = min(_quantize_raw(-math.log(u) / w), r_max)
        raw_old = _pk_get(words, bits, per_word, j)
        changes = y - r_min > raw_old
        if changes or track_variance:
            s = 0.0
            for k in range(nbins):
                cnt = int(histogram[k])
                if cnt > 0:
                    s += cnt * -math.expm1(-w * scale[k])
            q = s / m
            if track_variance:
                state[1] += w * w * (1.0 - q) / q if q > 0.0 else math.inf
            if changes:
                histogram[raw_old] -= 1
                histogram[y - r_min] += 1
                _pk_set(words, bits, per_word, j, y - r_min)
                state[0] += w / q
