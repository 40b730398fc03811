"""Self-contained invariant suite behind the `verify` subcommand.

Each check exercises one structural identity of the implementation with
fixed seeds, so a verification run is deterministic in CI.  `quick` trims
sizes, not coverage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coefficients import a_via_loggamma, build_coefficients
from .distance import w1_to_normal, w1_to_normal_quadrature
from .martingale import (
    conditional_moment_residuals,
    martingale_trace,
    qv_closed_form,
)
from .params import WalkParams
from .streams import DEFAULT_SEED
from .walk import DiscreteDistribution, exact_distribution, simulate_path


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_coefficients(quick: bool, seed: int) -> CheckResult:
    n = 10_000 if quick else 1_000_000
    worst = 0.0
    for p in (0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9):
        table = build_coefficients(WalkParams(p=p, q=0.5, n=n))
        probe = np.unique(np.geomspace(1, n, 60).astype(np.int64))
        oracle = a_via_loggamma(probe, p)
        worst = max(worst, float(np.max(np.abs(table.a[probe - 1] / oracle - 1.0))))
    return CheckResult(
        "coefficients-recurrence-vs-loggamma",
        worst < 1e-9,
        f"max relative gap {worst:.3e} over p grid at n = {n} (tolerance 1e-9)",
    )


def _check_dp_conservation(quick: bool, seed: int) -> CheckResult:
    worst = 0.0
    n = 200 if quick else 600
    try:
        for p, q in ((0.25, 0.5), (0.6, 0.3), (0.75, 0.9)):
            law = exact_distribution(WalkParams(p=p, q=q, n=n), check_conservation=True)
            worst = max(worst, abs(float(law.weights.sum()) - 1.0))
    except AssertionError as exc:
        return CheckResult("dp-mass-conservation", False, str(exc))
    return CheckResult(
        "dp-mass-conservation",
        worst < 1e-12,
        f"max |total mass - 1| = {worst:.3e} at every step to n = {n} (tolerance 1e-12)",
    )


def _check_increment_bound(quick: bool, seed: int) -> CheckResult:
    paths = 200 if quick else 2000
    n = 300
    worst = 0.0
    for p in (0.25, 0.6, 0.75):
        params = WalkParams(p=p, q=0.5, n=n)
        table = build_coefficients(params)
        for r in range(paths):
            trace = martingale_trace(simulate_path(params, seed, r), table, params.q)
            worst = max(worst, float(np.max(np.abs(trace.dm) / (2.0 * table.a))))
    return CheckResult(
        "increment-envelope",
        worst <= 1.0,
        f"max |dm_i| / (2 a_i) = {worst:.6f} over {3 * paths} paths (bound 1, exact)",
    )


def _check_conditional_moments(quick: bool, seed: int) -> CheckResult:
    n = 200 if quick else 500
    worst = 0.0
    for p in (0.25, 0.6, 0.75):
        worst = max(worst, *conditional_moment_residuals(p, n))
    return CheckResult(
        "conditional-moment-identities",
        worst < 1e-12,
        f"max residual {worst:.3e} over all lattice states up to n = {n} (tolerance 1e-12)",
    )


def _check_qv_closed_form(quick: bool, seed: int) -> CheckResult:
    paths = 50 if quick else 400
    n = 400
    worst = 0.0
    for p, q in ((0.3, 0.5), (0.65, 0.5), (0.75, 0.5), (0.6, 0.2)):
        params = WalkParams(p=p, q=q, n=n)
        table = build_coefficients(params)
        for r in range(paths):
            trace = martingale_trace(simulate_path(params, seed + 1, r), table, q)
            closed = qv_closed_form(trace, table, q)
            worst = max(worst, abs(closed / float(trace.qv[-1]) - 1.0))
    return CheckResult(
        "qv-closed-form",
        worst < 1e-10,
        f"max relative gap {worst:.3e} between accumulated and telescoped forms "
        "(tolerance 1e-10)",
    )


def _check_distance_quadrature(quick: bool, seed: int) -> CheckResult:
    rng = np.random.Generator(np.random.Philox(key=[seed, 2**32]))
    cases = 10 if quick else 40
    worst = 0.0
    for _ in range(cases):
        m = int(rng.integers(1, 21))
        atoms = np.sort(rng.uniform(-5.0, 5.0, size=m))
        atoms += np.arange(m) * 1e-9  # nudge apart any near-duplicates
        weights = rng.dirichlet(np.ones(m))
        dist = DiscreteDistribution.from_raw(atoms, weights)
        closed = w1_to_normal(dist).value
        quad = w1_to_normal_quadrature(dist)
        worst = max(worst, abs(closed - quad))
    return CheckResult(
        "distance-closed-form-vs-quadrature",
        worst < 1e-8,
        f"max |closed - quadrature| = {worst:.3e} over {cases} random laws (tolerance 1e-8)",
    )


_CHECKS: tuple[Callable[[bool, int], CheckResult], ...] = (
    _check_coefficients,
    _check_dp_conservation,
    _check_increment_bound,
    _check_conditional_moments,
    _check_qv_closed_form,
    _check_distance_quadrature,
)


def run_verify(quick: bool = False, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    return [check(quick, seed) for check in _CHECKS]
