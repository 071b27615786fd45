"""Result type returned by sketch estimators."""

from __future__ import annotations

from dataclasses import dataclass

# Estimator outcome flags.
FLAG_OK = "ok"
FLAG_ALL_MIN = "all_min"          # every register still at its floor; stream was empty
FLAG_ALL_MAX = "all_max"          # every register saturated; estimate is a range sentinel
FLAG_NOT_CONVERGED = "not_converged"
FLAG_NOT_SATURATED = "not_saturated"  # baseline sketch with untouched registers

_VALID_FLAGS = frozenset(
    {FLAG_OK, FLAG_ALL_MIN, FLAG_ALL_MAX, FLAG_NOT_CONVERGED, FLAG_NOT_SATURATED}
)


@dataclass(frozen=True)
class EstimateReport:
    """Cardinality estimate with its variance proxy and solver metadata.

    ``converged`` is True only for a clean solve: it implies ``flag == "ok"``
    and that ``iterations`` stayed within the solver cap.  Closed-form
    estimators report converged=True with iterations=0.
    """

    estimate: float
    variance: float
    iterations: int = 0
    converged: bool = True
    flag: str = FLAG_OK

    def __post_init__(self):
        if self.flag not in _VALID_FLAGS:
            raise ValueError(f"unknown flag {self.flag!r}")
        if self.converged and self.flag != FLAG_OK:
            raise ValueError("a converged report must carry the ok flag")
