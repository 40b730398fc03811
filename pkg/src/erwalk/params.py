"""Walk parameters and memory-regime classification."""

from __future__ import annotations

import enum
import numbers
from dataclasses import dataclass


class Regime(str, enum.Enum):
    """Phase of the walk as a function of the memory parameter p.

    Boundaries are exact comparisons against 0.5 and 0.75: the caller
    selects the regime by choosing p, so no epsilon fuzzing is applied.
    """

    DIFFUSIVE_LOW = "diffusive-low"    # 0 < p < 1/2
    DEGENERATE = "degenerate"          # p = 1/2 (plain symmetric walk)
    DIFFUSIVE_HIGH = "diffusive-high"  # 1/2 < p < 3/4
    CRITICAL = "critical"              # p = 3/4
    SUPERDIFFUSIVE = "superdiffusive"  # p > 3/4


def classify_regime(p: float) -> Regime:
    if p < 0.5:
        return Regime.DIFFUSIVE_LOW
    if p == 0.5:
        return Regime.DEGENERATE
    if p < 0.75:
        return Regime.DIFFUSIVE_HIGH
    if p == 0.75:
        return Regime.CRITICAL
    return Regime.SUPERDIFFUSIVE


@dataclass(frozen=True)
class WalkParams:
    """Memory parameter p, first-step parameter q, and horizon n.

    p is the probability of copying (rather than flipping) a uniformly
    chosen past step; q is the probability that the first step is +1.
    p = 0 and p = 1 give deterministic flip/copy walks and are rejected.
    """

    p: float
    q: float
    n: int

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"memory parameter p must lie in (0, 1), got {self.p}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"first-step parameter q must lie in [0, 1], got {self.q}")
        if (
            isinstance(self.n, bool)
            or not isinstance(self.n, numbers.Integral)
            or self.n < 1
        ):
            raise ValueError(f"horizon n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def regime(self) -> Regime:
        return classify_regime(self.p)
