"""Compiled and pure-numpy kernels must agree: bit-identically for the
quantized sketches (integer state, scalar libm on both sides), and to
floating-point noise for the unquantized baseline (vectorized log)."""

import os
import subprocess
import sys

import numpy as np
import pytest

from qsketch import kernels
from qsketch.kernels import numpy_backend

numba_backend = pytest.importorskip("qsketch.kernels.numba_backend")


def random_batch(seed, n):
    rng = np.random.default_rng(seed)
    keys = rng.integers(0, 2**64, n, dtype=np.uint64)
    # include duplicates so overwrite paths get exercised
    keys[rng.integers(0, n, n // 10)] = keys[0]
    weights = np.exp(rng.uniform(-3.0, 3.0, n))
    return keys, weights


class TestActiveBackend:
    def test_name_is_valid(self):
        assert kernels.BACKEND in ("numba", "numpy")

    def test_override_selects_numpy(self):
        code = (
            "import os; os.environ['QSKETCH_BACKEND'] = 'numpy'; "
            "from qsketch import kernels; print(kernels.BACKEND)"
        )
        out = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True,
            env={**os.environ, "QSKETCH_BACKEND": "numpy"},
        )
        assert out.returncode == 0
        assert out.stdout.strip() == "numpy"

    def test_invalid_override_rejected(self):
        out = subprocess.run(
            [sys.executable, "-c", "import qsketch.kernels"],
            capture_output=True, text=True,
            env={**os.environ, "QSKETCH_BACKEND": "fortran"},
        )
        assert out.returncode != 0
        assert "QSKETCH_BACKEND" in out.stderr


class TestKernelAgreement:
    SEED = np.uint64(99)

    @pytest.mark.parametrize("trial", range(5))
    def test_lm_close(self, trial):
        keys, weights = random_batch(trial, 300)
        a = np.full(64, np.inf)
        b = np.full(64, np.inf)
        numba_backend.lm_update_many(a, self.SEED, keys, weights)
        numpy_backend.lm_update_many(b, self.SEED, keys, weights)
        np.testing.assert_allclose(a, b, rtol=1e-13)

    @pytest.mark.parametrize("trial", range(5))
    def test_fastgm_identical(self, trial):
        keys, weights = random_batch(10 + trial, 200)
        a = np.full(32, np.inf)
        b = np.full(32, np.inf)
        numba_backend.fastgm_update_many(a, self.SEED, keys, weights, True)
        numpy_backend.fastgm_update_many(b, self.SEED, keys, weights, True)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("bits", [4, 8])
    def test_qsketch_identical(self, bits):
        for trial in range(5):
            keys, weights = random_batch(20 + trial, 300)
            per_word = 32 // bits
            n_words = -(-64 // per_word)
            a = np.zeros(n_words, dtype=np.uint32)
            b = np.zeros(n_words, dtype=np.uint32)
            numba_backend.qsketch_update_many(a, 64, bits, self.SEED, keys, weights, True)
            numpy_backend.qsketch_update_many(b, 64, bits, self.SEED, keys, weights, True)
            np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("track", [False, True])
    def test_qdyn_identical(self, track):
        for trial in range(5):
            keys, weights = random_batch(40 + trial, 300)
            m, bits = 64, 8
            n_words = -(-m // (32 // bits))
            wa = np.zeros(n_words, dtype=np.uint32)
            wb = np.zeros(n_words, dtype=np.uint32)
            ha = np.zeros(1 << bits, dtype=np.int64)
            hb = np.zeros(1 << bits, dtype=np.int64)
            ha[0] = hb[0] = m
            sa = np.zeros(2)
            sb = np.zeros(2)
            numba_backend.qdyn_update_many(wa, ha, m, bits, self.SEED, keys, weights, sa, track)
            numpy_backend.qdyn_update_many(wb, hb, m, bits, self.SEED, keys, weights, sb, track)
            np.testing.assert_array_equal(wa, wb)
            np.testing.assert_array_equal(ha, hb)
            np.testing.assert_array_equal(sa, sb)  # running sums bit-identical


class TestFacadeDelegation:
    def test_exports_match_active_module(self):
        for fn in ("lm_update_many", "fastgm_update_many",
                   "qsketch_update_many", "qdyn_update_many"):
            assert hasattr(kernels, fn)
