"""The drift-free transform of the walk and its quadratic variation.

m_k = a_k s_k - 2q + 1 is a martingale: the conditional mean of s_k given
the past is gamma_{k-1} s_{k-1}, and a_k gamma_{k-1} = a_{k-1} by the
defining recurrence, so the a_k weight exactly cancels the drift.  Its
increments are bounded, |dm_k| <= 2 a_k, and their conditional variances
have the closed form a_k^2 (1 - (2p-1)^2 (s_{k-1}/(k-1))^2).

First-increment convention: dm_1 = eta_1 - (2q - 1) has true variance
1 - (2q-1)^2, which equals a_1^2 = 1 only at q = 1/2.  The "telescoping"
convention books a_1^2 so that the running quadratic variation telescopes
against v_n exactly; the "exact" convention books the true variance.
Both are implemented; they differ by a constant and agree at q = 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .coefficients import CoefficientTable
from .params import WalkParams
from .streams import DEFAULT_SEED, map_replicate_chunks, replicate_stream
from .walk import WalkPath

FIRST_INCREMENT_CONVENTIONS = ("telescoping", "exact")


def _first_increment_variance(q: float, convention: str) -> float:
    if convention not in FIRST_INCREMENT_CONVENTIONS:
        raise ValueError(f"unknown first-increment convention {convention!r}")
    if convention == "exact":
        return 1.0 - (2.0 * q - 1.0) ** 2
    return 1.0  # a_1^2


@dataclass(frozen=True)
class MartingaleTrace:
    """Transform values, increments, and running quadratic variation along
    one path; qv_normalized is the terminal quadratic variation over v_n."""

    m: np.ndarray = field(repr=False)
    dm: np.ndarray = field(repr=False)
    qv: np.ndarray = field(repr=False)
    qv_normalized: float


def qv_increment(
    k: int,
    s_prev: int,
    table: CoefficientTable,
    q: float,
    *,
    first_increment: str = "telescoping",
) -> float:
    """Conditional variance of the k-th increment given position s_prev at
    time k-1.  For k = 1 the configured first-increment convention applies
    and s_prev is ignored."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return _first_increment_variance(q, first_increment)
    if abs(s_prev) > k - 1:
        raise ValueError(f"|s_prev| = {abs(s_prev)} exceeds k-1 = {k - 1}: unreachable state")
    a_k = float(table.a[k - 1])
    frac = s_prev / (k - 1)
    return a_k * a_k * (1.0 - (2.0 * table.p - 1.0) ** 2 * frac * frac)


def martingale_trace(
    path: WalkPath,
    table: CoefficientTable,
    q: float,
    *,
    first_increment: str = "telescoping",
) -> MartingaleTrace:
    """Transform, increments, and predictable quadratic variation along a
    realized path.  The quadratic variation accumulates the conditional
    variances evaluated at the path's own previous positions."""
    if path.n != table.n:
        raise ValueError(f"path length {path.n} does not match table length {table.n}")
    s = path.s.astype(np.float64)
    m = table.a * s - (2.0 * q - 1.0)
    dm = np.empty_like(m)
    dm[0] = m[0]
    dm[1:] = np.diff(m)
    inc = np.empty_like(m)
    inc[0] = _first_increment_variance(q, first_increment)
    if path.n > 1:
        ks = np.arange(1.0, path.n)
        frac = s[:-1] / ks
        inc[1:] = table.a[1:] ** 2 * (1.0 - (2.0 * table.p - 1.0) ** 2 * frac * frac)
    qv = np.cumsum(inc)
    return MartingaleTrace(m=m, dm=dm, qv=qv, qv_normalized=float(qv[-1] / table.v_n))


def qv_closed_form(
    trace: MartingaleTrace,
    table: CoefficientTable,
    q: float,
    *,
    literal_form: bool = False,
) -> float:
    """Terminal quadratic variation recomputed without accumulation:

        v_n - (2p-1)^2 sum_{k=1}^{n-1} (a_{k+1}/a_k)^2 ((m_k + 2q - 1)/k)^2

    since a_k s_k = m_k + 2q - 1.  `literal_form` drops the 2q - 1 shift
    (using (m_k/k)^2 verbatim), which is exact only at q = 1/2.  Matches
    the accumulated trace under the "telescoping" first-increment convention.
    """
    n = table.n
    if n == 1:
        return 1.0
    ks = np.arange(1.0, n)
    shift = 0.0 if literal_form else 2.0 * q - 1.0
    scaled = (table.a[1:] / table.a[:-1]) ** 2 * ((trace.m[:-1] + shift) / ks) ** 2
    return float(table.v_n - (2.0 * table.p - 1.0) ** 2 * scaled.sum())


def xi_sup_bound(params: WalkParams, table: CoefficientTable) -> float:
    """Deterministic sup bound max_i 2 a_i / sqrt(v_n) for the normalized
    increments; the envelope epsilon_n entering the rate formulas."""
    if table.n != params.n:
        raise ValueError("table was built for a different horizon")
    return float(2.0 * table.a.max() / math.sqrt(table.v_n))


@dataclass(frozen=True)
class QvDeviation:
    """Monte Carlo estimate of E |<X>_n - 1| with its standard error."""

    mean_abs_dev: float
    stderr: float
    reps: int


def qv_deviation_mc(
    params: WalkParams,
    reps: int,
    master_seed: int = DEFAULT_SEED,
    *,
    first_increment: str = "telescoping",
    threads: int = 1,
) -> QvDeviation:
    """Estimate E |<X>_n - 1| where <X>_n is the terminal quadratic
    variation over v_n, by simulating fresh replicates."""
    if reps < 100:
        raise ValueError("need at least 100 replicates for a meaningful standard error")
    from .coefficients import build_coefficients

    table = build_coefficients(params)
    a, a2, v_n = table.a, table.a ** 2, table.v_n
    p, q, n = params.p, params.q, params.n
    first_exact = first_increment == "exact"
    _first_increment_variance(q, first_increment)  # validate name

    def worker(lo: int, hi: int) -> np.ndarray:
        out = np.empty(hi - lo)
        for i, r in enumerate(range(lo, hi)):
            u = replicate_stream(master_seed, r).random(n)
            _, qv, _, _ = _kernels.walk_stats_marginal(u, a, a2, p, q, first_exact)
            out[i] = abs(qv / v_n - 1.0)
        return out

    devs = map_replicate_chunks(worker, reps, threads)
    return QvDeviation(
        mean_abs_dev=float(devs.mean()),
        stderr=float(devs.std(ddof=1) / math.sqrt(reps)),
        reps=reps,
    )


def qv_deviation_exact(params: WalkParams, *, first_increment: str = "telescoping") -> float:
    """Exact E |<X>_n - 1| from the second-moment recursion.

    The deviation is one-sided (the quadratic variation never exceeds its
    telescoped ceiling), so the mean absolute deviation reduces to
    (2p-1)^2 sum_k a_{k+1}^2 E[s_k^2] / k^2 / v_n, and E[s_k^2] obeys
    E[s_k^2] = (2 gamma_{k-1} - 1) E[s_{k-1}^2] + 1 exactly.  Serves as an
    independent oracle for qv_deviation_mc.
    """
    from .coefficients import build_coefficients

    table = build_coefficients(params)
    n = params.n
    shift = 1.0 - _first_increment_variance(params.q, first_increment)
    if n == 1:
        return shift / table.v_n
    es2 = np.empty(n - 1)
    es2[0] = 1.0
    for k in range(2, n):
        g = 1.0 + (2.0 * params.p - 1.0) / (k - 1)
        es2[k - 1] = (2.0 * g - 1.0) * es2[k - 2] + 1.0
    ks = np.arange(1.0, n)
    total = float(np.sum(table.a[1:] ** 2 * es2 / ks ** 2))
    return ((2.0 * params.p - 1.0) ** 2 * total + shift) / table.v_n


@dataclass(frozen=True)
class McPathSummary:
    """Terminal-transform statistics over many replicates."""

    mean_m: float
    stderr_m: float
    max_dm_ratio: float
    reps: int


def martingale_mc_summary(
    params: WalkParams,
    reps: int,
    master_seed: int = DEFAULT_SEED,
    *,
    threads: int = 1,
) -> McPathSummary:
    """Mean of the terminal transform (zero in expectation) and the worst
    pathwise |dm_i| / (2 a_i) ratio, which the increment bound caps at 1."""
    from .coefficients import build_coefficients

    table = build_coefficients(params)
    a, a2 = table.a, table.a ** 2
    p, q, n = params.p, params.q, params.n

    def worker(lo: int, hi: int) -> np.ndarray:
        out = np.empty((hi - lo, 2))
        for i, r in enumerate(range(lo, hi)):
            u = replicate_stream(master_seed, r).random(n)
            _, _, ratio, m_final = _kernels.walk_stats_marginal(u, a, a2, p, q, False)
            out[i, 0] = m_final
            out[i, 1] = ratio
        return out

    stats = map_replicate_chunks(worker, reps, threads).reshape(-1, 2)
    m = stats[:, 0]
    return McPathSummary(
        mean_m=float(m.mean()),
        stderr_m=float(m.std(ddof=1) / math.sqrt(reps)),
        max_dm_ratio=float(stats[:, 1].max()),
        reps=reps,
    )


def conditional_moment_residuals(p: float, n: int) -> tuple[float, float]:
    """Largest residuals, over every lattice state s at every time
    k-1 < n, of the one-step identities

        E[s_k | s]   = gamma_{k-1} s
        E[s_k^2 | s] = (2 gamma_{k-1} - 1) s^2 + 1

    evaluated directly against the two-point transition kernel.  The
    identities are algebraically exact, so each residual is scaled by the
    magnitude of the predicted moment (floored at 1 near zero): raw
    differences of the direct expectation unavoidably carry s^2 * eps of
    double rounding, which would read as ~1e-11 at s ~ 500 despite exact
    agreement."""
    worst_mean = 0.0
    worst_second = 0.0
    for k in range(2, n + 1):
        s = np.arange(-(k - 1), k, 2, dtype=np.float64)
        up = 0.5 * (1.0 + (2.0 * p - 1.0) * s / (k - 1))
        g = 1.0 + (2.0 * p - 1.0) / (k - 1)
        mean_kernel = up * (s + 1.0) + (1.0 - up) * (s - 1.0)
        mean_expect = g * s
        second_kernel = up * (s + 1.0) ** 2 + (1.0 - up) * (s - 1.0) ** 2
        second_expect = (2.0 * g - 1.0) * s * s + 1.0
        worst_mean = max(worst_mean, float(np.max(
            np.abs(mean_kernel - mean_expect) / np.maximum(1.0, np.abs(mean_expect))
        )))
        worst_second = max(worst_second, float(np.max(
            np.abs(second_kernel - second_expect) / np.maximum(1.0, np.abs(second_expect))
        )))
    return worst_mean, worst_second
