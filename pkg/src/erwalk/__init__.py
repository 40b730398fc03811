"""Elephant random walk toolkit.

Simulation and exact distribution of the memory-reinforced +-1 walk,
closed-form Wasserstein-1 distance of its normalized law to the standard
normal, the drift-free martingale transform with its quadratic variation,
and regime-rate scans with envelope checks.
"""

from .coefficients import (
    AsymptoticRatios,
    CoefficientTable,
    a_via_loggamma,
    asymptotic_ratios,
    build_coefficients,
    gamma_at_2p,
)
from .distance import (
    W1Result,
    empirical_distribution,
    normal_cdf,
    normal_pdf,
    normal_quantile,
    w1_discrete,
    w1_to_normal,
    w1_to_normal_quadrature,
)
from .errors import ResourceLimitError, UnsupportedRegimeError
from .martingale import (
    MartingaleTrace,
    McPathSummary,
    QvDeviation,
    conditional_moment_residuals,
    martingale_mc_summary,
    martingale_trace,
    qv_closed_form,
    qv_deviation_exact,
    qv_deviation_mc,
    qv_increment,
    xi_sup_bound,
)
from .params import Regime, WalkParams, classify_regime
from .rates import (
    RateReport,
    fit_log_slope,
    hat_epsilon,
    theoretical_rate,
    w1_scan_exact,
    w1_scan_mc,
)
from .streams import DEFAULT_SEED, replicate_stream
from .walk import (
    DP_CEILING,
    DiscreteDistribution,
    WalkPath,
    enumerate_distribution,
    enumeration_as_distribution,
    exact_distribution,
    normalize_distribution,
    sample_final_positions,
    simulate_path,
    transition_prob_up,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticRatios",
    "CoefficientTable",
    "DEFAULT_SEED",
    "DP_CEILING",
    "DiscreteDistribution",
    "MartingaleTrace",
    "McPathSummary",
    "QvDeviation",
    "RateReport",
    "Regime",
    "ResourceLimitError",
    "UnsupportedRegimeError",
    "W1Result",
    "WalkParams",
    "WalkPath",
    "a_via_loggamma",
    "asymptotic_ratios",
    "build_coefficients",
    "classify_regime",
    "conditional_moment_residuals",
    "empirical_distribution",
    "enumerate_distribution",
    "enumeration_as_distribution",
    "exact_distribution",
    "fit_log_slope",
    "gamma_at_2p",
    "hat_epsilon",
    "martingale_mc_summary",
    "martingale_trace",
    "normal_cdf",
    "normal_pdf",
    "normal_quantile",
    "normalize_distribution",
    "qv_closed_form",
    "qv_deviation_exact",
    "qv_deviation_mc",
    "qv_increment",
    "replicate_stream",
    "sample_final_positions",
    "simulate_path",
    "theoretical_rate",
    "transition_prob_up",
    "w1_discrete",
    "w1_scan_exact",
    "w1_scan_mc",
    "w1_to_normal",
    "w1_to_normal_quadrature",
    "xi_sup_bound",
]
