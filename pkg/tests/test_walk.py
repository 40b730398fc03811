"""Simulation, exact dynamic program, and enumeration oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from erwalk import (
    DiscreteDistribution,
    ResourceLimitError,
    WalkParams,
    build_coefficients,
    enumerate_distribution,
    enumeration_as_distribution,
    exact_distribution,
    normalize_distribution,
    sample_final_positions,
    simulate_path,
    transition_prob_up,
)

SEED = 90210


class TestTransitionProb:
    def test_first_step_reinforcement(self):
        # a single +1 in memory: stepping up means drawing the copy sign
        assert transition_prob_up(0.75, 1, 1) == pytest.approx(0.75, abs=1e-15)

    def test_zero_mean_state_is_symmetric(self):
        for p in (0.1, 0.6, 0.95):
            assert transition_prob_up(p, 4, 0) == 0.5

    def test_degenerate_p(self):
        assert transition_prob_up(0.5, 7, 3) == 0.5

    def test_bounds_on_reachable_states(self):
        for k in (1, 5, 40):
            for s in range(-k, k + 1, 2):
                assert 0.0 <= transition_prob_up(0.9, k, s) <= 1.0

    def test_unreachable_state_rejected(self):
        with pytest.raises(ValueError):
            transition_prob_up(0.6, 3, 5)


class TestSimulatePath:
    def test_forced_first_step(self):
        path = simulate_path(WalkParams(p=0.5, q=1.0, n=1), SEED, 0)
        assert path.eta.tolist() == [1]
        assert path.s.tolist() == [1]

    def test_positions_are_prefix_sums_with_parity(self):
        path = simulate_path(WalkParams(p=0.7, q=0.3, n=200), SEED, 3)
        assert np.array_equal(path.s, np.cumsum(path.eta))
        k = np.arange(1, 201)
        assert np.all(np.abs(path.s) <= k)
        assert np.all((path.s - k) % 2 == 0)

    def test_reproducible_and_replicates_differ(self):
        params = WalkParams(p=0.6, q=0.5, n=64)
        one = simulate_path(params, SEED, 7)
        two = simulate_path(params, SEED, 7)
        other = simulate_path(params, SEED, 8)
        assert np.array_equal(one.eta, two.eta)
        assert not np.array_equal(one.eta, other.eta)

    def test_literal_reinforcement_probability(self):
        # strong copying from an all-plus start: every step stays +1 with
        # probability p per step, so P(all +1) = p^(n-1)
        params = WalkParams(p=0.999, q=1.0, n=20)
        reps = 100_000
        finals = sample_final_positions(params, reps, SEED, literal=True)
        frac_all_plus = float(np.mean(finals == 20))
        assert frac_all_plus == pytest.approx(0.999 ** 19, abs=0.005)

    def test_marginal_two_step_law(self):
        # P(S_2 = 2) = q * p at (p=0.75, q=0.5)
        params = WalkParams(p=0.75, q=0.5, n=2)
        finals = sample_final_positions(params, 1_000_000, SEED)
        assert float(np.mean(finals == 2)) == pytest.approx(0.375, abs=0.002)

    def test_batch_matches_single_paths_both_modes(self):
        params = WalkParams(p=0.65, q=0.4, n=37)
        for literal in (False, True):
            batch = sample_final_positions(params, 25, SEED, literal=literal)
            singles = [
                simulate_path(params, SEED, r, literal=literal).s[-1] for r in range(25)
            ]
            assert batch.tolist() == singles

    def test_threads_do_not_change_results(self):
        params = WalkParams(p=0.3, q=0.5, n=50)
        assert np.array_equal(
            sample_final_positions(params, 999, SEED, threads=1),
            sample_final_positions(params, 999, SEED, threads=8),
        )

    def test_modes_statistically_indistinguishable(self):
        # two-sample chi-square on terminal positions at n = 50
        params = WalkParams(p=0.7, q=0.5, n=50)
        reps = 100_000
        marginal = sample_final_positions(params, reps, SEED)
        literal = sample_final_positions(params, reps, SEED + 1, literal=True)
        atoms = np.arange(-50, 51, 2)
        c1 = np.array([np.count_nonzero(marginal == a) for a in atoms], dtype=float)
        c2 = np.array([np.count_nonzero(literal == a) for a in atoms], dtype=float)
        keep = (c1 + c2) >= 10
        c1, c2 = c1[keep], c2[keep]
        statistic = float(np.sum((c1 - c2) ** 2 / (c1 + c2)))
        pvalue = float(stats.chi2.sf(statistic, df=len(c1) - 1))
        assert pvalue > 1e-3


class TestExactDistribution:
    def test_one_step_law(self):
        law = exact_distribution(WalkParams(p=0.3, q=0.7, n=1))
        assert law.atoms.tolist() == [-1.0, 1.0]
        assert law.weights == pytest.approx([0.3, 0.7], abs=1e-15)

    def test_two_step_law(self):
        law = exact_distribution(WalkParams(p=0.75, q=0.5, n=2))
        assert law.atoms.tolist() == [-2.0, 0.0, 2.0]
        assert law.weights == pytest.approx([0.375, 0.25, 0.375], abs=1e-15)

    def test_degenerate_reduces_to_binomial(self):
        law = exact_distribution(WalkParams(p=0.5, q=0.5, n=3))
        assert law.atoms.tolist() == [-3.0, -1.0, 1.0, 3.0]
        assert law.weights == pytest.approx([1 / 8, 3 / 8, 3 / 8, 1 / 8], abs=1e-15)

    @pytest.mark.parametrize("p,q,n", [(0.25, 0.5, 97), (0.6, 0.3, 256), (0.75, 0.9, 401)])
    def test_mass_conserved_at_every_step(self, p, q, n):
        law = exact_distribution(WalkParams(p=p, q=q, n=n), check_conservation=True)
        assert abs(float(law.weights.sum()) - 1.0) < 1e-12

    def test_martingale_mean_identity_on_dp_output(self):
        # sum_s P(S_n = s) (a_n s - 2q + 1) = 0 exactly in law
        for p, q, n in ((0.3, 0.2, 150), (0.75, 0.8, 150), (0.6, 0.5, 300)):
            params = WalkParams(p=p, q=q, n=n)
            law = exact_distribution(params)
            t = build_coefficients(params)
            mean_m = float(np.dot(law.weights, t.a_n * law.atoms - (2 * q - 1)))
            assert abs(mean_m) < 1e-10

    def test_one_step_martingale_identity_per_state(self):
        # a_{n+1} (s + (2p-1) s / n) = a_n s on every lattice state
        p, n = 0.65, 40
        t = build_coefficients(WalkParams(p=p, q=0.5, n=n + 1))
        s = np.arange(-n, n + 1, 2, dtype=float)
        lhs = t.a[n] * (s + (2 * p - 1) * s / n)
        rhs = t.a[n - 1] * s
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_ceiling_enforced(self):
        with pytest.raises(ResourceLimitError, match="dp-ceiling"):
            exact_distribution(WalkParams(p=0.6, q=0.5, n=300), max_n=100)

    def test_q_one_drops_unreachable_atoms(self):
        law = exact_distribution(WalkParams(p=0.6, q=1.0, n=2))
        assert law.atoms.tolist() == [0.0, 2.0]


class TestEnumerationOracle:
    def test_eta_enumeration_matches_dp(self):
        for p, q, n in ((0.3, 0.5, 9), (0.75, 0.25, 9), (0.6, 1.0, 8)):
            law = enumerate_distribution(p, q, n)
            dp = exact_distribution(WalkParams(p=p, q=q, n=n))
            enum = enumeration_as_distribution(law)
            assert enum.atoms.tolist() == dp.atoms.tolist()
            assert np.max(np.abs(enum.weights - dp.weights)) < 1e-13

    def test_alpha_beta_enumeration_matches_eta(self):
        # every driving (sign, index) history, individually
        for p, q in ((0.7, 0.5), (0.25, 0.8)):
            via_eta = enumerate_distribution(p, q, 6)
            via_ab = enumerate_distribution(p, q, 6, mode="alpha-beta")
            assert set(via_eta) == set(via_ab)
            for s in via_eta:
                assert via_ab[s] == pytest.approx(via_eta[s], abs=1e-12)

    def test_exact_rational_enumeration(self):
        law = enumerate_distribution(Fraction(3, 4), Fraction(1, 2), 2)
        assert law == {-2: Fraction(3, 8), 0: Fraction(1, 4), 2: Fraction(3, 8)}

    def test_mode_guards(self):
        with pytest.raises(ValueError):
            enumerate_distribution(0.5, 0.5, 23)
        with pytest.raises(ValueError):
            enumerate_distribution(0.5, 0.5, 10, mode="alpha-beta")
        with pytest.raises(ValueError):
            enumerate_distribution(0.5, 0.5, 5, mode="bogus")


class TestNormalize:
    def test_degenerate_scaling(self):
        params = WalkParams(p=0.5, q=0.5, n=4)
        t = build_coefficients(params)
        dist = DiscreteDistribution(atoms=np.array([2.0]), weights=np.array([1.0]))
        out = normalize_distribution(dist, t)
        assert out.atoms.tolist() == [1.0]

    def test_centering_noop_at_q_half(self):
        params = WalkParams(p=0.7, q=0.5, n=32)
        t = build_coefficients(params)
        law = exact_distribution(params)
        plain = normalize_distribution(law, t, q=0.5, center=False)
        centered = normalize_distribution(law, t, q=0.5, center=True)
        assert np.array_equal(plain.atoms, centered.atoms)

    def test_critical_three_step_atom(self):
        params = WalkParams(p=0.75, q=0.5, n=3)
        t = build_coefficients(params)
        dist = DiscreteDistribution(atoms=np.array([3.0]), weights=np.array([1.0]))
        out = normalize_distribution(dist, t)
        v3 = 1.0 + 4.0 / 9.0 + 64.0 / 225.0
        assert out.atoms[0] == pytest.approx(3.0 * (8.0 / 15.0) / math.sqrt(v3), rel=1e-14)

    def test_weights_untouched(self):
        params = WalkParams(p=0.6, q=0.3, n=10)
        law = exact_distribution(params)
        out = normalize_distribution(law, build_coefficients(params), q=0.3, center=True)
        assert np.array_equal(out.weights, law.weights)


class TestDiscreteDistribution:
    def test_canonicalization_merges_sorts_drops(self):
        d = DiscreteDistribution.from_raw([3.0, -1.0, 3.0, 0.0], [0.25, 0.5, 0.25, 0.0])
        assert d.atoms.tolist() == [-1.0, 3.0]
        assert d.weights.tolist() == [0.5, 0.5]

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            DiscreteDistribution(atoms=np.array([1.0, 1.0]), weights=np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            DiscreteDistribution(atoms=np.array([0.0]), weights=np.array([0.9]))
        with pytest.raises(ValueError):
            DiscreteDistribution.from_raw([0.0], [0.0])
        with pytest.raises(ValueError):
            DiscreteDistribution.from_raw([], [])

    def test_moments(self):
        d = DiscreteDistribution(atoms=np.array([-1.0, 1.0]), weights=np.array([0.5, 0.5]))
        assert d.mean() == 0.0
        assert d.variance() == 1.0
