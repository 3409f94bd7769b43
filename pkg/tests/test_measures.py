import math

import numpy as np
import pytest

from qmean.combinat import WeightClass, class_count
from qmean.measures import (
    IndexWindow,
    SymmetricMeasure,
    dump_measure_text,
    measure_class_condition,
    parse_measure_text,
    uniform_inputs,
    uniform_means,
)


class TestUniformInputs:
    def test_n3(self):
        mu = uniform_inputs(3)
        assert np.allclose(mu.class_prob, [1 / 8, 3 / 8, 3 / 8, 1 / 8], atol=0)

    def test_n1(self):
        mu = uniform_inputs(1)
        assert list(mu.class_prob) == [0.5, 0.5]

    def test_unit_mass(self):
        for n in (2, 7, 30, 100, 1000, 4096):
            mu = uniform_inputs(n)
            assert abs(math.fsum(mu.class_prob) - 1.0) <= 1e-12

    def test_per_string_constant(self):
        for n in (1, 2, 17, 60):
            mu = uniform_inputs(n)
            ps = [mu.per_string(k) for k in range(n + 1)]
            ref = 2.0 ** (-n)
            assert all(abs(p - ref) <= 1e-12 * ref for p in ps)

    def test_per_string_constant_large(self):
        mu = uniform_inputs(300)
        ps = [mu.per_string(k) for k in range(301)]
        ref = np.median(ps)
        assert all(abs(p - ref) <= 1e-12 * ref for p in ps)


class TestUniformMeans:
    def test_per_string_n2(self):
        mu = uniform_means(2)
        assert mu.per_string(1) == pytest.approx(1 / 6, abs=1e-15)

    def test_classprob_constant(self):
        mu = uniform_means(4)
        assert all(p == 0.2 for p in mu.class_prob)
        mu = uniform_means(2)
        assert len(set(mu.class_prob)) == 1
        assert mu.class_prob[0] == pytest.approx(1 / 3, abs=1e-16)

    def test_unit_mass(self):
        for n in (2, 31, 999, 4096):
            assert abs(math.fsum(uniform_means(n).class_prob) - 1.0) <= 1e-12


class TestValidation:
    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            SymmetricMeasure(1, np.array([1.5, -0.5]))

    def test_bad_mass_rejected(self):
        with pytest.raises(ValueError):
            SymmetricMeasure(1, np.array([0.6, 0.6]))

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            SymmetricMeasure(3, np.array([0.5, 0.5]))


class TestIndexWindow:
    def test_invalid(self):
        with pytest.raises(ValueError):
            IndexWindow(10, 7, 3)
        with pytest.raises(ValueError):
            IndexWindow(10, 0, 11)

    def test_size_and_balancedness(self):
        w = IndexWindow(100, 25, 75)
        assert w.size == 51
        assert w.balancedness() == pytest.approx(25 * 75 / 100**2)


class TestMeasureClassCondition:
    def test_uniform_means_central_window(self):
        n = 100
        w = IndexWindow(n, math.ceil(n / 4), 3 * n // 4)
        rep = measure_class_condition(uniform_means(n), w, 0.5)
        assert rep.holds

    def test_uniform_means_every_n(self):
        # central window of the quoted cardinality n/2 + 1; the ceil/floor
        # variant {ceil(n/4)..floor(3n/4)} drops below that size whenever
        # n = 1 (mod 4) and the c = 1/2 bound genuinely fails there
        for n in range(8, 4097):
            lo = n // 4
            w = IndexWindow(n, lo, lo + n // 2)
            rep = measure_class_condition(uniform_means(n), w, 0.5)
            assert rep.holds, f"n={n} worst_ratio={rep.worst_ratio}"
            assert rep.balancedness >= 0.14

    def test_uniform_inputs_root_n_window(self):
        n = 400
        s = int(math.sqrt(n))
        w = IndexWindow(n, n // 2 - s, n // 2 + s)
        c = math.exp(-8.0) / math.sqrt(2.0 * math.pi)
        rep = measure_class_condition(uniform_inputs(n), w, c)
        assert rep.holds
        # direct evaluation backs the check: worst class weight vs c/|I|
        mu = uniform_inputs(n)
        worst = min(mu.class_prob[w.lo : w.hi + 1])
        assert worst >= c / w.size

    def test_point_mass_fails(self):
        probs = np.zeros(11)
        probs[0] = 1.0
        mu = SymmetricMeasure(10, probs)
        rep = measure_class_condition(mu, IndexWindow(10, 1, 2), 1e-6)
        assert not rep.holds
        assert rep.worst_ratio == 0.0

    def test_mismatched_n(self):
        with pytest.raises(ValueError):
            measure_class_condition(uniform_means(5), IndexWindow(6, 1, 2), 0.5)

    def test_nonpositive_c(self):
        with pytest.raises(ValueError):
            measure_class_condition(uniform_means(5), IndexWindow(5, 1, 2), 0.0)


class TestMeasureFiles:
    def test_roundtrip(self):
        mu = uniform_inputs(6)
        text = dump_measure_text(mu)
        back = parse_measure_text(text)
        assert back.n == 6
        assert np.allclose(back.class_prob, mu.class_prob, atol=1e-15)

    def test_comments_and_normalization(self):
        text = "# test measure\n2\n0.25  # quarter\n0.5\n0.2525\n"
        mu = parse_measure_text(text)
        assert abs(math.fsum(mu.class_prob) - 1.0) <= 1e-12

    def test_gross_mass_error_rejected(self):
        with pytest.raises(ValueError):
            parse_measure_text("2\n0.5\n0.5\n0.5\n")

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            parse_measure_text("1\n1.5\n-0.5\n")

    def test_wrong_count_rejected(self):
        with pytest.raises(ValueError):
            parse_measure_text("3\n0.5\n0.5\n")

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            parse_measure_text("# nothing here\n")

    def test_per_string_well_defined_for_positive_classes(self):
        mu = parse_measure_text("4\n0\n0.5\n0\n0.5\n0\n")
        for k in range(5):
            if mu.class_prob[k] > 0:
                assert mu.per_string(k) == mu.class_prob[k] / class_count(WeightClass(4, k))
