import math

import numpy as np
import pytest

from qmean.combinat import WeightClass
from qmean.estimators import (
    EstimatorSpec,
    PartialFnSpec,
    ae_distribution,
    ae_unitary_oracle,
    classical_bernoulli,
    constant_half,
    distinguisher,
    make_distribution,
    median_of_reps,
    total_variation,
)
from qmean.errors import quantile_error

from oracles import brute_force_order_stat


def dist_of(atoms, probs, n=4, k=2, queries=1):
    return make_distribution(WeightClass(n, k), queries, np.array(atoms), np.array(probs))


class TestAeDistribution:
    def test_all_zeros_single_atom(self):
        d = ae_distribution(WeightClass(8, 0), 16)
        assert list(d.estimates) == [0.0]
        assert list(d.probs) == [1.0]

    def test_half_on_grid_merges_to_point(self):
        d = ae_distribution(WeightClass(2, 1), 4)
        assert list(d.estimates) == [0.5]
        assert d.probs[0] == pytest.approx(1.0, abs=1e-10)

    def test_five_atoms_vs_oracle(self):
        d = ae_distribution(WeightClass(4, 1), 8)
        o = ae_unitary_oracle(WeightClass(4, 1), 8)
        assert len(d.estimates) == 5
        assert total_variation(d, o) <= 1e-10

    def test_all_ones_even_m(self):
        d = ae_distribution(WeightClass(7, 7), 16)
        assert list(d.estimates) == [1.0]
        assert d.probs[0] == pytest.approx(1.0, abs=1e-10)

    def test_m_too_small(self):
        with pytest.raises(ValueError):
            ae_distribution(WeightClass(4, 1), 1)

    def test_queries_recorded_as_m(self):
        assert ae_distribution(WeightClass(4, 1), 32).queries == 32

    def test_normalization_and_range(self):
        for n in (3, 5, 16):
            for k in range(n + 1):
                for M in (2, 3, 7, 16, 33):
                    d = ae_distribution(WeightClass(n, k), M)
                    assert abs(d.total_mass() - 1.0) <= 1e-9
                    assert d.estimates[0] >= 0.0 and d.estimates[-1] <= 1.0

    def test_mirror_symmetry(self):
        for n in (2, 3, 6, 11, 16):
            for M in (2, 4, 6, 8, 12, 24, 48):
                for k in range(n + 1):
                    d1 = ae_distribution(WeightClass(n, k), M)
                    d2 = ae_distribution(WeightClass(n, n - k), M)
                    refl = np.sort(1.0 - d2.estimates)
                    perm = np.argsort(1.0 - d2.estimates, kind="stable")
                    assert len(refl) == len(d1.estimates)
                    assert np.max(np.abs(refl - d1.estimates)) <= 1e-10
                    assert np.max(np.abs(d2.probs[perm] - d1.probs)) <= 1e-10

    def test_on_grid_eigenphase_zero_error(self):
        # omega = 1/4 sits on every grid with M divisible by 4
        for M in (4, 8, 12, 64):
            d = ae_distribution(WeightClass(2, 1), M)
            mass = sum(p for e, p in zip(d.estimates, d.probs) if e == 0.5)
            assert mass == pytest.approx(1.0, abs=1e-10)


class TestAeUnitaryOracle:
    def test_agreement_n16(self):
        for k in range(17):
            w = WeightClass(16, k)
            for M in (2, 4, 8, 16, 32, 64):
                tv = total_variation(ae_distribution(w, M), ae_unitary_oracle(w, M))
                assert tv <= 1e-10, f"k={k} M={M}: tv={tv}"

    def test_zero_class(self):
        d = ae_unitary_oracle(WeightClass(5, 0), 8)
        assert list(d.estimates) == [0.0]
        assert d.probs[0] == pytest.approx(1.0, abs=1e-12)

    def test_full_class_even_m(self):
        d = ae_unitary_oracle(WeightClass(5, 5), 16)
        assert list(d.estimates) == [1.0]
        assert d.probs[0] == pytest.approx(1.0, abs=1e-10)

    def test_m_out_of_range(self):
        with pytest.raises(ValueError):
            ae_unitary_oracle(WeightClass(4, 1), 1)
        with pytest.raises(ValueError):
            ae_unitary_oracle(WeightClass(4, 1), 257)


class TestConstantHalf:
    def test_atoms(self):
        d = constant_half(WeightClass(100, 3))
        assert list(d.estimates) == [0.5]
        assert list(d.probs) == [1.0]
        assert d.queries == 0

    def test_error_against_true_mean(self):
        d = constant_half(WeightClass(2, 1))
        assert quantile_error(d, 0.5, 1.0) == 0.0
        d = constant_half(WeightClass(4, 0))
        assert quantile_error(d, 0.0, 1.0) == 0.5


class TestClassicalBernoulli:
    def test_two_fair_flips(self):
        d = classical_bernoulli(WeightClass(2, 1), 2)
        assert np.allclose(d.estimates, [0.0, 0.5, 1.0], atol=0)
        assert np.allclose(d.probs, [0.25, 0.5, 0.25], atol=1e-15)

    def test_zero_class(self):
        for T in (1, 5, 17):
            d = classical_bernoulli(WeightClass(6, 0), T)
            assert list(d.estimates) == [0.0]
            assert list(d.probs) == [1.0]

    def test_monte_carlo(self):
        w = WeightClass(10, 3)
        T = 5
        d = classical_bernoulli(w, T)
        rng = np.random.default_rng(20240810)
        draws = rng.binomial(T, 0.3, size=10**6) / T
        for est, prob in zip(d.estimates, d.probs):
            freq = np.mean(draws == est)
            sigma = math.sqrt(prob * (1 - prob) / 10**6)
            assert abs(freq - prob) <= 3.0 * sigma + 1e-9

    def test_t_positive(self):
        with pytest.raises(ValueError):
            classical_bernoulli(WeightClass(2, 1), 0)


class TestMedianOfReps:
    def test_fair_bit_median(self):
        d = dist_of([0.0, 1.0], [0.5, 0.5])
        m = median_of_reps(d, 3)
        assert np.allclose(m.estimates, [0.0, 1.0], atol=0)
        assert np.allclose(m.probs, [0.5, 0.5], atol=1e-14)

    def test_r1_identity(self):
        d = dist_of([0.0, 0.5, 1.0], [0.25, 0.5, 0.25])
        assert median_of_reps(d, 1) is d

    def test_three_atoms_r3_brute_force(self):
        atoms = [0.0, 0.5, 1.0]
        probs = [0.25, 0.5, 0.25]
        d = dist_of(atoms, probs)
        m = median_of_reps(d, 3)
        vals, ref = brute_force_order_stat(atoms, probs, 3, 2)
        assert np.allclose(m.estimates, vals, atol=0)
        assert np.allclose(m.probs, ref, atol=5e-14)

    def test_matches_brute_force_randomized(self):
        rng = np.random.default_rng(99)
        for _ in range(40):
            na = int(rng.integers(2, 7))
            r = int(rng.integers(2, 6))
            atoms = np.sort(rng.choice(np.linspace(0, 1, 21), size=na, replace=False))
            raw = rng.dirichlet(np.ones(na))
            d = dist_of(atoms, raw)
            m = median_of_reps(d, r)
            vals, ref = brute_force_order_stat(list(d.estimates), list(d.probs), r, r // 2 + 1)
            assert np.allclose(m.estimates, vals, atol=0)
            assert np.allclose(m.probs, ref, atol=5e-13)

    def test_query_accounting(self):
        d = ae_distribution(WeightClass(8, 3), 16)
        assert median_of_reps(d, 4).queries == 64

    def test_r_positive(self):
        with pytest.raises(ValueError):
            median_of_reps(dist_of([0.5], [1.0]), 0)


class TestDistinguisher:
    def test_constant_passes_threshold(self):
        spec = PartialFnSpec(4, 3, 1)
        rep = distinguisher(
            constant_half(WeightClass(4, 3)), constant_half(WeightClass(4, 1)), spec, 2.0
        )
        assert rep.accept1 == 1.0 and rep.accept2 == 1.0
        assert rep.fail1 == 0.0 and rep.fail2 == 1.0

    def test_perfect_estimators_separate(self):
        n, k1, k2 = 8, 6, 2
        d1 = make_distribution(WeightClass(n, k1), 3, np.array([k1 / n]), np.array([1.0]))
        d2 = make_distribution(WeightClass(n, k2), 3, np.array([k2 / n]), np.array([1.0]))
        rep = distinguisher(d1, d2, PartialFnSpec(n, k1, k2), (k1 - k2) / 2)
        assert rep.fail1 == 0.0 and rep.fail2 == 0.0

    def test_failure_bound_instance(self):
        n, M, p = 16, 32, 0.81
        k1, k2 = 12, 4
        d1 = ae_distribution(WeightClass(n, k1), M)
        d2 = ae_distribution(WeightClass(n, k2), M)
        q1 = quantile_error(d1, k1 / n, p)
        q2 = quantile_error(d2, k2 / n, p)
        threshold = 4.0
        if n * max(q1, q2) <= threshold and threshold <= (k1 - k2) / 2 * 2:
            rep = distinguisher(d1, d2, PartialFnSpec(n, k1, k2), threshold)
            assert rep.fail1 <= 1 - p + 1e-12
            assert rep.fail2 <= 1 - p + 1e-12

    def test_mismatched_inputs(self):
        d1 = ae_distribution(WeightClass(8, 5), 8)
        d2 = ae_distribution(WeightClass(8, 2), 16)
        with pytest.raises(ValueError):
            distinguisher(d1, d2, PartialFnSpec(8, 5, 2), 1.0)
        d3 = ae_distribution(WeightClass(6, 2), 8)
        with pytest.raises(ValueError):
            distinguisher(d1, d3, PartialFnSpec(8, 5, 2), 1.0)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            PartialFnSpec(4, 2, 2)
        with pytest.raises(ValueError):
            PartialFnSpec(4, 5, 1)


class TestDistributionConstruction:
    def test_merging_within_tolerance(self):
        d = dist_of([0.5, 0.5 + 5e-13, 0.25], [0.3, 0.2, 0.5])
        assert len(d.estimates) == 2
        assert d.probs[list(d.estimates).index(0.5)] == pytest.approx(0.5, abs=1e-15)

    def test_bad_mass_rejected(self):
        with pytest.raises(ValueError):
            dist_of([0.5], [0.9])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            dist_of([1.5], [1.0])

    def test_json_shape(self):
        d = ae_distribution(WeightClass(4, 1), 8)
        obj = d.to_json_dict()
        assert set(obj) == {"n", "k", "queries", "atoms"}
        assert all(len(a) == 2 for a in obj["atoms"])


class TestEstimatorSpec:
    def test_tags(self):
        assert EstimatorSpec("ae").tag == "ae"
        assert EstimatorSpec("median-reps", 4).tag == "median-reps-r4"

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            EstimatorSpec("quantum-leap")

    def test_reps_only_for_median(self):
        with pytest.raises(ValueError):
            EstimatorSpec("ae", reps=2)

    def test_queries(self):
        assert EstimatorSpec("constant").queries(99) == 0
        assert EstimatorSpec("median-reps", 4).queries(16) == 64
        assert EstimatorSpec("bernoulli").queries(7) == 7

    def test_dispatch(self):
        w = WeightClass(6, 2)
        assert EstimatorSpec("constant").distribution(w, 0).queries == 0
        assert EstimatorSpec("ae").distribution(w, 8).queries == 8
        assert EstimatorSpec("ae-oracle").distribution(w, 8).queries == 8
        assert EstimatorSpec("bernoulli").distribution(w, 5).queries == 5
        assert EstimatorSpec("median-reps", 2).distribution(w, 8).queries == 16
