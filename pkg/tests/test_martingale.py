"""Martingale transform, increments, quadratic variation, deviations."""

import math
from fractions import Fraction

import numpy as np
import pytest

from erwalk import (
    WalkParams,
    build_coefficients,
    conditional_moment_residuals,
    martingale_mc_summary,
    martingale_trace,
    qv_closed_form,
    qv_deviation_exact,
    qv_deviation_mc,
    qv_increment,
    simulate_path,
    xi_sup_bound,
)

SEED = 555


def setup_case(p, q, n, seed=SEED, replicate=0):
    params = WalkParams(p=p, q=q, n=n)
    table = build_coefficients(params)
    path = simulate_path(params, seed, replicate)
    return params, table, path


class TestTrace:
    def test_degenerate_transform_is_the_walk(self):
        _, table, path = setup_case(0.5, 0.5, 120)
        trace = martingale_trace(path, table, 0.5)
        assert np.array_equal(trace.m, path.s.astype(float))
        assert np.array_equal(trace.dm, path.eta.astype(float))
        assert np.array_equal(trace.qv, np.arange(1.0, 121.0))
        assert trace.qv_normalized == 1.0

    def test_transform_recomputable_from_path(self):
        _, table, path = setup_case(0.7, 0.2, 300)
        trace = martingale_trace(path, table, 0.2)
        assert trace.m == pytest.approx(table.a * path.s - (2 * 0.2 - 1), rel=1e-14)

    def test_forced_start_transform_vanishes(self):
        _, table, path = setup_case(0.6, 1.0, 5)
        trace = martingale_trace(path, table, 1.0)
        assert trace.m[0] == 0.0

    def test_increment_bound_holds_pathwise(self):
        for p in (0.25, 0.6, 0.75):
            params, table, _ = setup_case(p, 0.5, 400)
            for r in range(200):
                path = simulate_path(params, SEED, r)
                trace = martingale_trace(path, table, 0.5)
                assert np.all(np.abs(trace.dm) <= 2.0 * table.a)

    def test_qv_nondecreasing_and_increments_capped(self):
        _, table, path = setup_case(0.8, 0.4, 250)
        trace = martingale_trace(path, table, 0.4)
        inc = np.diff(trace.qv)
        assert np.all(inc >= 0.0)
        assert np.all(inc <= table.a[1:] ** 2 + 1e-15)

    def test_length_mismatch_rejected(self):
        params, _, path = setup_case(0.6, 0.5, 50)
        wrong = build_coefficients(WalkParams(p=0.6, q=0.5, n=49))
        with pytest.raises(ValueError):
            martingale_trace(path, wrong, 0.5)


class TestQvIncrement:
    def test_two_step_critical_value(self):
        table = build_coefficients(WalkParams(p=0.75, q=0.5, n=3))
        for s_prev in (-1, 1):
            assert qv_increment(2, s_prev, table, 0.5) == pytest.approx(1.0 / 3.0, rel=1e-14)

    def test_degenerate_increments_are_one(self):
        table = build_coefficients(WalkParams(p=0.5, q=0.5, n=10))
        for k in (2, 5, 9):
            assert qv_increment(k, k - 1, table, 0.5) == 1.0

    def test_maximal_state(self):
        p = 0.62
        table = build_coefficients(WalkParams(p=p, q=0.5, n=6))
        a5 = float(table.a[4])
        expected = a5 * a5 * (1.0 - (2 * p - 1) ** 2)
        assert qv_increment(5, 4, table, 0.5) == pytest.approx(expected, rel=1e-14)

    def test_first_increment_conventions(self):
        table = build_coefficients(WalkParams(p=0.6, q=0.2, n=3))
        assert qv_increment(1, 0, table, 0.2) == 1.0
        assert qv_increment(1, 0, table, 0.2, first_increment="exact") == pytest.approx(
            1.0 - 0.6 ** 2, rel=1e-14
        )

    def test_unreachable_state_rejected(self):
        table = build_coefficients(WalkParams(p=0.6, q=0.5, n=5))
        with pytest.raises(ValueError):
            qv_increment(3, 4, table, 0.5)


class TestClosedForm:
    def test_matches_accumulation_at_q_half_both_forms(self):
        params, table, _ = setup_case(0.65, 0.5, 300)
        for r in range(100):
            trace = martingale_trace(simulate_path(params, SEED, r), table, 0.5)
            assert qv_closed_form(trace, table, 0.5) == pytest.approx(
                float(trace.qv[-1]), rel=1e-10
            )
            assert qv_closed_form(trace, table, 0.5, literal_form=True) == pytest.approx(
                float(trace.qv[-1]), rel=1e-10
            )

    def test_shifted_form_needed_off_center(self):
        # with q != 1/2 the transform absorbs a constant, so the telescoped
        # form must add it back; the literal form then drifts
        params, table, _ = setup_case(0.7, 0.1, 200)
        exact_gaps, literal_gaps = [], []
        for r in range(50):
            trace = martingale_trace(simulate_path(params, SEED, r), table, 0.1)
            accumulated = float(trace.qv[-1])
            exact_gaps.append(abs(qv_closed_form(trace, table, 0.1) / accumulated - 1.0))
            literal_gaps.append(
                abs(qv_closed_form(trace, table, 0.1, literal_form=True) / accumulated - 1.0)
            )
        assert max(exact_gaps) < 1e-10
        assert max(literal_gaps) > 1e-6


class TestConditionalMoments:
    @pytest.mark.parametrize("p", [0.25, 0.6, 0.75])
    def test_identities_machine_exact(self, p):
        worst_mean, worst_second = conditional_moment_residuals(p, 300)
        assert worst_mean < 1e-12
        assert worst_second < 1e-12

    def test_identities_exact_in_rational_arithmetic(self):
        # the identities are algebra, not approximation: verify literally
        # zero residual with exact fractions on a small horizon
        p = Fraction(3, 5)
        for k in range(2, 60):
            g = 1 + (2 * p - 1) / (k - 1)
            for s in range(-(k - 1), k, 2):
                up = Fraction(1, 2) * (1 + (2 * p - 1) * Fraction(s, k - 1))
                mean = up * (s + 1) + (1 - up) * (s - 1)
                second = up * (s + 1) ** 2 + (1 - up) * (s - 1) ** 2
                assert mean == g * s
                assert second == (2 * g - 1) * s ** 2 + 1


class TestXiSupBound:
    def test_degenerate_value(self):
        params = WalkParams(p=0.5, q=0.5, n=400)
        table = build_coefficients(params)
        assert xi_sup_bound(params, table) == pytest.approx(2.0 / 20.0, rel=1e-14)

    def test_low_memory_max_at_horizon(self):
        params = WalkParams(p=0.3, q=0.5, n=10_000)
        table = build_coefficients(params)
        bound = xi_sup_bound(params, table)
        assert bound == pytest.approx(2.0 * table.a[-1] / math.sqrt(table.v_n), rel=1e-14)
        # Stirling shape: 2 sqrt(3-4p) / sqrt(n) up to O(1/n) corrections
        assert bound / (2.0 * math.sqrt(1.8) / 100.0) == pytest.approx(1.0, abs=0.05)

    def test_critical_max_at_first_step(self):
        params = WalkParams(p=0.75, q=0.5, n=10_000)
        table = build_coefficients(params)
        bound = xi_sup_bound(params, table)
        assert bound == pytest.approx(2.0 / math.sqrt(table.v_n), rel=1e-14)
        # order (log n)^{-1/2}
        assert 1.0 < bound * math.sqrt(math.log(10_000)) < 4.0


class TestQvDeviation:
    def test_degenerate_is_exactly_zero(self):
        result = qv_deviation_mc(WalkParams(p=0.5, q=0.5, n=200), 500, SEED)
        assert result.mean_abs_dev == 0.0
        assert result.stderr == 0.0

    def test_mc_matches_exact_oracle(self):
        for p, q, n in ((0.6, 0.5, 150), (0.75, 0.5, 100), (0.3, 0.2, 120)):
            params = WalkParams(p=p, q=q, n=n)
            exact = qv_deviation_exact(params)
            mc = qv_deviation_mc(params, 20_000, SEED)
            assert abs(mc.mean_abs_dev - exact) < 5.0 * mc.stderr + 1e-12

    def test_exact_oracle_conventions(self):
        params = WalkParams(p=0.6, q=0.2, n=50)
        telescoping = qv_deviation_exact(params)
        exact_conv = qv_deviation_exact(params, first_increment="exact")
        table = build_coefficients(params)
        assert exact_conv == pytest.approx(
            telescoping + (2 * 0.2 - 1) ** 2 / table.v_n, rel=1e-12
        )

    def test_low_memory_decay_is_inverse_n(self):
        # in the low regime the deviation decays like 1/n
        vals = [qv_deviation_exact(WalkParams(p=0.3, q=0.5, n=n)) for n in (100, 1000, 10000)]
        assert 5.0 < vals[0] / vals[1] < 20.0
        assert 5.0 < vals[1] / vals[2] < 20.0

    def test_high_memory_decay_is_variance_scale(self):
        # for 1/2 < p < 3/4 the summed squared-mean series converges, so
        # the deviation decays like n^{-(3-4p)}, measurably slower than 1/n
        vals = [qv_deviation_exact(WalkParams(p=0.6, q=0.5, n=n)) for n in (100, 1000, 10000)]
        for ratio in (vals[0] / vals[1], vals[1] / vals[2]):
            assert 3.0 < ratio < 4.5
            assert ratio < 5.0  # strictly below the 1/n decade ratio

    def test_reps_floor(self):
        with pytest.raises(ValueError):
            qv_deviation_mc(WalkParams(p=0.6, q=0.5, n=10), 50, SEED)


class TestMcSummary:
    def test_zero_mean_and_bound(self):
        summary = martingale_mc_summary(WalkParams(p=0.7, q=0.3, n=100), 20_000, SEED)
        assert abs(summary.mean_m) <= 4.0 * summary.stderr_m
        assert summary.max_dm_ratio <= 1.0

    def test_threads_invariant(self):
        params = WalkParams(p=0.6, q=0.5, n=80)
        one = martingale_mc_summary(params, 5000, SEED, threads=1)
        eight = martingale_mc_summary(params, 5000, SEED, threads=8)
        assert one == eight
