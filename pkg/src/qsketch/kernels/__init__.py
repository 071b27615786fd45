"""Kernel backend selection.

The environment variable QSKETCH_BACKEND picks the update-kernel
implementation: "numba" (compiled; the default when numba imports cleanly)
or "numpy" (pure Python/NumPy fallback).  Both expose the same four
update entry points with identical state semantics; benchmarks/backend_bench.py
measures the gap between them.
"""

from __future__ import annotations

import os

_choice = os.environ.get("QSKETCH_BACKEND", "").strip().lower()
if _choice not in ("", "numba", "numpy"):
    raise ValueError(
        f"QSKETCH_BACKEND={_choice!r} is not recognized; use 'numba' or 'numpy'"
    )

if _choice == "numpy":
    from . import numpy_backend as _active
elif _choice == "numba":
    from . import numba_backend as _active
else:
    try:
        from . import numba_backend as _active
    except ImportError:
        from . import numpy_backend as _active

BACKEND = _active.NAME
lm_update_many = _active.lm_update_many
fastgm_update_many = _active.fastgm_update_many
qsketch_update_many = _active.qsketch_update_many
qdyn_update_many = _active.qdyn_update_many

_warmed = False


def warmup() -> None:
    """Run every kernel once on tiny inputs (triggers JIT compilation)."""
    global _warmed
    if _warmed:
        return
    import numpy as np

    keys = np.array([1, 2], dtype=np.uint64)
    weights = np.array([1.0, 2.0], dtype=np.float64)
    seed = np.uint64(1)
    lm_update_many(np.full(4, np.inf), seed, keys, weights)
    fastgm_update_many(np.full(4, np.inf), seed, keys, weights, True)
    fastgm_update_many(np.full(4, np.inf), seed, keys, weights, False)
    qsketch_update_many(np.zeros(1, np.uint32), 4, 8, seed, keys, weights, True)
    qsketch_update_many(np.zeros(1, np.uint32), 4, 8, seed, keys, weights, False)
    hist = np.zeros(256, np.int64)
    hist[0] = 4
    qdyn_update_many(
        np.zeros(1, np.uint32), hist, 4, 8, seed, keys, weights, np.zeros(2), False
    )
    hist2 = np.zeros(256, np.int64)
    hist2[0] = 4
    qdyn_update_many(
        np.zeros(1, np.uint32), hist2, 4, 8, seed, keys, weights, np.zeros(2), True
    )
    _warmed = True
