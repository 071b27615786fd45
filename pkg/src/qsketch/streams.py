"""Synthetic weighted streams and CSV stream files.

A stream is a sequence of (key, weight) elements; keys are canonical uint64
ids and repeated keys always carry the weight of their first occurrence, so
the true weighted cardinality is the sum of weights over distinct keys.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from ._hash import GOLDEN_GAMMA, MASK64, key_to_u64, mix64_vec

DISTRIBUTIONS = ("uniform", "gauss", "gamma", "constant")

_DEFAULT_PARAMS = {
    "uniform": (0.0, 1.0),   # low, high
    "gauss": (1.0, 0.1),     # mean, std (resampled to stay positive)
    "gamma": (1.0, 2.0),     # shape, scale
    "constant": (1.0,),      # weight
}


class WeightedElement(NamedTuple):
    key: int
    weight: float


@dataclass(frozen=True)
class StreamSpec:
    """Recipe for a synthetic stream: distribution, size, seed, duplication."""

    distribution: str
    n: int
    seed: int
    params: tuple[float, ...] = ()
    duplication_factor: int = 1

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(
                f"unknown distribution {self.distribution!r}; choose from {DISTRIBUTIONS}"
            )
        if self.n < 0:
            raise ValueError(f"stream size must be >= 0, got {self.n}")
        if self.duplication_factor < 1:
            raise ValueError(f"duplication factor must be >= 1, got {self.duplication_factor}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    def resolved_params(self) -> tuple[float, ...]:
        defaults = _DEFAULT_PARAMS[self.distribution]
        if not self.params:
            return defaults
        if len(self.params) != len(defaults):
            raise ValueError(
                f"{self.distribution} takes {len(defaults)} parameter(s), got {len(self.params)}"
            )
        return self.params


@dataclass
class Stream:
    """Materialized element arrays plus generator-side bookkeeping."""

    keys: np.ndarray
    weights: np.ndarray
    drawn_weight_sum: float | None = None
    label: str = ""

    def __len__(self) -> int:
        return int(self.keys.shape[0])

    def __iter__(self) -> Iterator[WeightedElement]:
        for k, w in zip(self.keys, self.weights):
            yield WeightedElement(int(k), float(w))


def _draw_weights(rng: np.random.Generator, distribution: str, n: int,
                  params: tuple[float, ...]) -> np.ndarray:
    if distribution == "uniform":
        low, high = params
        if low < 0.0 or high <= low:
            raise ValueError(f"uniform needs 0 <= low < high, got ({low}, {high})")
        # 1 - random() lies in (0, 1], keeping weights strictly above `low`.
        w = low + (high - low) * (1.0 - rng.random(n))
    elif distribution == "gauss":
        mean, std = params
        if std < 0.0:
            raise ValueError(f"gauss needs std >= 0, got {std}")
        w = rng.normal(mean, std, n)
        bad = w <= 0.0
        while bad.any():
            w[bad] = rng.normal(mean, std, int(bad.sum()))
            bad = w <= 0.0
    elif distribution == "gamma":
        shape, scale = params
        if shape <= 0.0 or scale <= 0.0:
            raise ValueError(f"gamma needs positive shape and scale, got ({shape}, {scale})")
        w = rng.gamma(shape, scale, n)
        bad = w <= 0.0
        while bad.any():
            w[bad] = rng.gamma(shape, scale, int(bad.sum()))
            bad = w <= 0.0
    else:
        (weight,) = params
        if weight <= 0.0:
            raise ValueError(f"constant weight must be positive, got {weight}")
        w = np.full(n, weight, dtype=np.float64)
    return np.asarray(w, dtype=np.float64)


def generate(spec: StreamSpec) -> Stream:
    """Materialize a synthetic stream.

    Keys are sequential ids pushed through a 64-bit bijective mix, so the n
    elements are distinct by construction.  With duplication_factor d, each
    element appears d times and the copies are shuffled through the whole
    stream; the true cardinality is unchanged.  drawn_weight_sum records the
    exact sum of drawn weights as independent bookkeeping.
    """
    params = spec.resolved_params()
    rng = np.random.default_rng(spec.seed)
    weights = _draw_weights(rng, spec.distribution, spec.n, params)
    base = np.uint64((spec.seed * GOLDEN_GAMMA + 0x5EED) & MASK64)
    keys = mix64_vec(base + np.arange(spec.n, dtype=np.uint64))
    drawn = float(math.fsum(weights))
    if spec.duplication_factor > 1:
        order = rng.permutation(spec.n * spec.duplication_factor)
        idx = np.repeat(np.arange(spec.n), spec.duplication_factor)[order]
        keys = keys[idx]
        weights = weights[idx]
    label = f"{spec.distribution}-{spec.n}-seed{spec.seed}"
    return Stream(keys=keys, weights=weights, drawn_weight_sum=drawn, label=label)


def true_cardinality(stream: Stream | Iterable[tuple]) -> float:
    """Sum of weights over distinct keys, first occurrence winning.

    Independent of any sketch: walks the stream with an exact table.
    """
    seen: dict[int, float] = {}
    for key, weight in stream:
        seen.setdefault(int(key), float(weight))
    return float(math.fsum(seen.values()))


def load_csv(path) -> Stream:
    """Read a `key,weight` stream file.

    Lines starting with '#' and blank lines are skipped.  Keys are arbitrary
    tokens, canonicalized by hashing; weights must parse as positive finite
    floats.  A key reappearing with a different weight is re-emitted with
    its first weight, with a warning — sketches rely on a key's weight being
    stable.
    """
    keys: list[int] = []
    weights: list[float] = []
    first_weight: dict[int, float] = {}
    first_token: dict[int, str] = {}
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (row[0].lstrip().startswith("#")):
                continue
            if len(row) == 1 and not row[0].strip():
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'key,weight', got {','.join(row)!r}")
            token = row[0].strip()
            if not token:
                raise ValueError(f"{path}:{lineno}: empty key")
            try:
                weight = float(row[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: weight {row[1]!r} is not a number") from None
            if not (weight > 0.0 and math.isfinite(weight)):
                raise ValueError(f"{path}:{lineno}: weight must be positive and finite, got {weight}")
            key = key_to_u64(token)
            prior = first_weight.get(key)
            if prior is None:
                first_weight[key] = weight
                first_token[key] = token
            elif prior != weight:
                warnings.warn(
                    f"{path}:{lineno}: key {token!r} reappears with weight {weight} != {prior}; "
                    "keeping the first weight",
                    stacklevel=2,
                )
                weight = prior
            keys.append(key)
            weights.append(weight)
    return Stream(
        keys=np.array(keys, dtype=np.uint64),
        weights=np.array(weights, dtype=np.float64),
        label=str(path),
    )


def write_csv(stream: Stream, path) -> None:
    """Write a stream as `key,weight` lines (full float precision)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for key, weight in stream:
            writer.writerow([key, repr(weight)])
