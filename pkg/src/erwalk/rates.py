"""Distance-to-normal scans across horizons and rate-envelope checks.

The regime rate formulas (without their unknown constants) are

    diffusive-low   (0 < p < 1/2):  log n / sqrt(n)
    diffusive-high  (1/2 < p < 3/4): log n / n^{(3-4p)/2}
    critical        (p = 3/4):      log log n / sqrt(log n)

Upper bounds with unrecoverable constants cannot be checked pointwise, so
a scan reports (i) the fitted log-log decay slope and (ii) the envelope
ratio w1 / rate, whose maximum and first-to-last drift certify that the
measured distance never outgrows the claimed shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coefficients import build_coefficients
from .distance import empirical_distribution, w1_to_normal
from .errors import UnsupportedRegimeError
from .params import Regime, WalkParams, classify_regime
from .streams import DEFAULT_SEED, map_ordered
from .walk import DP_CEILING, exact_distribution, normalize_distribution, sample_final_positions

_RATE_REGIMES = (Regime.DIFFUSIVE_LOW, Regime.DIFFUSIVE_HIGH, Regime.CRITICAL)

# An empirical CDF built from `reps` samples sits at Wasserstein distance
# ~ 1/sqrt(reps) from its law; scan points whose theoretical rate is not
# comfortably above that floor carry no slope information.
_NOISE_FLOOR_MARGIN = 3.0


def theoretical_rate(n: int, p: float) -> float:
    """Regime rate formula at horizon n, constant-free."""
    if n < 3:
        raise ValueError("need n >= 3 so that log log n > 0")
    regime = classify_regime(p)
    if regime not in _RATE_REGIMES:
        raise UnsupportedRegimeError(
            f"no rate statement for p = {p} ({regime.value}); "
            "supported: 0 < p < 1/2, 1/2 < p < 3/4, p = 3/4"
        )
    log_n = math.log(n)
    if regime is Regime.DIFFUSIVE_LOW:
        return log_n / math.sqrt(n)
    if regime is Regime.DIFFUSIVE_HIGH:
        return log_n / float(n) ** ((3.0 - 4.0 * p) / 2.0)
    return math.log(log_n) / math.sqrt(log_n)


def hat_epsilon(eps: float, rho: float) -> float:
    """Moment-condition envelope: eps^rho below rho = 1, eps |log eps|
    at or above it."""
    if not 0.0 < eps <= 0.5:
        raise ValueError(f"eps must lie in (0, 1/2], got {eps}")
    if rho <= 0.0:
        raise ValueError(f"rho must be positive, got {rho}")
    if rho < 1.0:
        return eps ** rho
    return eps * abs(math.log(eps))


def fit_log_slope(ns, values) -> float:
    """Least-squares slope of log(values) against log(ns)."""
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if len(ns) < 4:
        raise ValueError("refusing to fit a decay slope to fewer than 4 points")
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


@dataclass(frozen=True)
class RateReport:
    """One scan of measured distances against the regime rate."""

    regime: Regime
    ns: np.ndarray = field(repr=False)
    w1: np.ndarray = field(repr=False)
    rate: np.ndarray = field(repr=False)
    fitted_slope: float
    envelope_c: float
    envelope_drift: float
    mode: str
    noise_floor: float | None = None

    @property
    def ratio(self) -> np.ndarray:
        return self.w1 / self.rate

    def to_dict(self) -> dict:
        out = {
            "regime": self.regime.value,
            "ns": [int(n) for n in self.ns],
            "w1": [float(v) for v in self.w1],
            "rate": [float(v) for v in self.rate],
            "ratio": [float(v) for v in self.ratio],
            "fitted_slope": None if math.isnan(self.fitted_slope) else self.fitted_slope,
            "envelope_c": self.envelope_c,
            "envelope_drift": self.envelope_drift,
            "mode": self.mode,
        }
        if self.noise_floor is not None:
            out["noise_floor"] = self.noise_floor
        return out


def _validate_scan_ns(ns) -> np.ndarray:
    ns = np.asarray(ns, dtype=np.int64)
    if len(ns) == 0 or np.any(np.diff(ns) <= 0):
        raise ValueError("scan horizons must be a nonempty strictly increasing sequence")
    if ns[0] < 3:
        raise ValueError("scan horizons must start at n >= 3")
    return ns


def _assemble_report(
    regime: Regime,
    ns: np.ndarray,
    w1: np.ndarray,
    p: float,
    mode: str,
    fit_mask: np.ndarray | None = None,
    noise_floor: float | None = None,
) -> RateReport:
    rate = np.array([theoretical_rate(int(n), p) for n in ns])
    ratio = w1 / rate
    if regime is Regime.CRITICAL:
        # log log n barely moves at desk scale; a log-log fit would be
        # uninformative, so only the envelope sequence is reported.
        slope = math.nan
    else:
        mask = np.ones(len(ns), dtype=bool) if fit_mask is None else fit_mask
        slope = fit_log_slope(ns[mask], w1[mask]) if int(mask.sum()) >= 4 else math.nan
    return RateReport(
        regime=regime,
        ns=ns,
        w1=w1,
        rate=rate,
        fitted_slope=slope,
        envelope_c=float(ratio.max()),
        envelope_drift=float(ratio[-1] / ratio[0]),
        mode=mode,
        noise_floor=noise_floor,
    )


def w1_scan_exact(
    p: float,
    q: float,
    ns,
    *,
    center: bool = False,
    threads: int = 1,
    max_n: int = DP_CEILING,
) -> RateReport:
    """Noise-free scan: exact law by dynamic programming at each horizon,
    normalized, then the closed-form distance to the normal."""
    ns = _validate_scan_ns(ns)
    regime = classify_regime(p)
    if regime not in _RATE_REGIMES:
        raise UnsupportedRegimeError(f"no rate statement for p = {p} ({regime.value})")

    def one(n: int) -> float:
        params = WalkParams(p=p, q=q, n=int(n))
        table = build_coefficients(params)
        law = exact_distribution(params, max_n=max_n)
        return w1_to_normal(normalize_distribution(law, table, q=q, center=center)).value

    w1 = np.array(map_ordered(one, list(ns), threads))
    return _assemble_report(regime, ns, w1, p, mode="exact")


def w1_scan_mc(
    p: float,
    q: float,
    ns,
    reps: int,
    master_seed: int = DEFAULT_SEED,
    *,
    center: bool = False,
    threads: int = 1,
) -> RateReport:
    """Monte Carlo scan for horizons beyond the dynamic-program budget.

    The report carries the 1/sqrt(reps) estimator-noise floor; horizons
    whose theoretical rate sits below 3x that floor are excluded from the
    slope fit, and if every horizon is excluded the scan refuses with a
    pointer to the exact mode.
    """
    ns = _validate_scan_ns(ns)
    if reps < 10_000:
        raise ValueError("need reps >= 10^4 for a usable empirical CDF")
    regime = classify_regime(p)
    if regime not in _RATE_REGIMES:
        raise UnsupportedRegimeError(f"no rate statement for p = {p} ({regime.value})")
    noise_floor = 1.0 / math.sqrt(reps)
    rate = np.array([theoretical_rate(int(n), p) for n in ns])
    usable = rate >= _NOISE_FLOOR_MARGIN * noise_floor
    if not np.any(usable):
        raise ValueError(
            "every scan horizon has a theoretical rate below "
            f"{_NOISE_FLOOR_MARGIN}x the Monte Carlo noise floor {noise_floor:.2e}; "
            "use the exact mode or raise reps"
        )

    def one(n: int) -> float:
        params = WalkParams(p=p, q=q, n=int(n))
        table = build_coefficients(params)
        samples = sample_final_positions(params, reps, master_seed, threads=1)
        law = empirical_distribution(samples)
        return w1_to_normal(normalize_distribution(law, table, q=q, center=center)).value

    w1 = np.array(map_ordered(one, list(ns), threads))
    return _assemble_report(regime, ns, w1, p, mode="mc", fit_mask=usable, noise_floor=noise_floor)
