import math

import numpy as np
import scikit_posthocs as sp
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from actuators.design_space import default_constraints, downselect, enumerate_design_space
from actuators.exceptions import DomainError
from actuators.metrics import TrialMetrics
from actuators.models import ActuatorSpec, CellShape, Metric
from actuators.stats import (
    Factor,
    Pooling,
    StatResult,
    compare_by_factor,
    dunn_posthoc,
    factor_groups,
    factor_spec,
    format_p,
    format_result,
    ks_normality,
    kruskal_wallis,
)

SEPARATED = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]


def mid_ranks(values):
    return [sum(v < x for v in values) + (sum(v == x for v in values) + 1) / 2 for x in values]


def brute_force_h(groups):
    pooled = [x for g in groups for x in g]
    ranks = mid_ranks(pooled)
    n = len(pooled)
    h, start = 0.0, 0
    for g in groups:
        r = ranks[start:start + len(g)]
        start += len(g)
        h += len(g) * (sum(r) / len(g) - (n + 1) / 2) ** 2
    h *= 12 / (n * (n + 1))
    ties = sum(c ** 3 - c for c in (pooled.count(v) for v in set(pooled)))
    correction = 1 - ties / (n ** 3 - n)
    return 0.0 if correction == 0 else h / correction


def chi2_p(h, df):
    return math.erfc(math.sqrt(h / 2)) if df == 1 else math.exp(-h / 2)


groups_strategy = st.lists(
    st.lists(st.integers(min_value=0, max_value=5), min_size=1, max_size=4),
    min_size=2,
    max_size=3,
).filter(lambda gs: 3 <= sum(len(g) for g in gs) <= 8)


class KruskalWallisTests(SimpleTestCase):
    def test_separated_groups(self):
        result = kruskal_wallis(SEPARATED)
        self.assertAlmostEqual(result.statistic, 7.2)
        self.assertEqual(result.df, 2)
        self.assertAlmostEqual(result.p_value, math.exp(-3.6))
        self.assertEqual(format_result(result), '(χ²(2)=7.200, p=0.027)')

    def test_identical_groups(self):
        result = kruskal_wallis([[5, 5], [5, 5], [5, 5]])
        self.assertEqual(result.statistic, 0.0)
        self.assertEqual(result.p_value, 1.0)

    def test_group_order_does_not_matter(self):
        groups = [[2.1, 3.5, 1.0], [4.4, 0.2], [3.3, 3.3, 7.0, 1.1]]
        forward = kruskal_wallis(groups)
        backward = kruskal_wallis(groups[::-1])
        self.assertAlmostEqual(forward.statistic, backward.statistic)
        self.assertAlmostEqual(forward.p_value, backward.p_value)

    def test_monotone_transform(self):
        groups = [[0.5, 1.5, 2.0], [2.5, 3.0, 0.1], [4.0, 5.0, 6.5]]
        self.assertAlmostEqual(
            kruskal_wallis(groups).statistic,
            kruskal_wallis([np.exp(g) for g in groups]).statistic,
        )

    def test_tied_groups_match_scipy(self):
        groups = [[1.0, 2.0, 2.0, 3.5], [2.0, 4.0, 5.0], [6.0, 6.0, 7.5, 9.0, 3.5]]
        expected = sps.kruskal(*groups)
        result = kruskal_wallis(groups)
        self.assertAlmostEqual(result.statistic, expected.statistic)
        self.assertAlmostEqual(result.p_value, expected.pvalue)
        self.assertAlmostEqual(result.statistic, brute_force_h(groups))

    def test_invalid_input(self):
        for groups in ([[1, 2, 3]], [[1, 2], []], [[1], [2]]):
            with self.subTest(groups=groups), self.assertRaises(DomainError):
                kruskal_wallis(groups)

    @settings(max_examples=200, deadline=None)
    @given(groups_strategy)
    def test_matches_mid_rank_definition(self, groups):
        result = kruskal_wallis(groups)
        expected = brute_force_h(groups)
        self.assertAlmostEqual(result.statistic, expected, places=9)
        self.assertGreaterEqual(result.statistic, 0.0)
        self.assertAlmostEqual(result.p_value, chi2_p(expected, len(groups) - 1), places=9)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 5), min_size=2, max_size=5), st.lists(st.integers(0, 5), min_size=1, max_size=5))
    def test_two_groups_square_the_dunn_z(self, a, b):
        if len(set(a + b)) < 2:
            return
        (pair,) = dunn_posthoc([a, b])
        self.assertAlmostEqual(kruskal_wallis([a, b]).statistic, pair.z ** 2, places=9)


class DunnTests(SimpleTestCase):
    def test_pairs_and_adjustment(self):
        table = dunn_posthoc(SEPARATED, labels=('a', 'b', 'c'))
        self.assertEqual([(c.group_a, c.group_b) for c in table], [('a', 'b'), ('a', 'c'), ('b', 'c')])
        for comparison in table:
            self.assertGreaterEqual(comparison.p_adjusted, comparison.p_raw)
            self.assertLessEqual(comparison.p_adjusted, min(1.0, 3 * comparison.p_raw) + 1e-12)
        self.assertAlmostEqual(abs(table[0].z), abs(table[2].z))
        # mean ranks 2 and 8, variance 7.5
        self.assertAlmostEqual(table[1].z, -6 / math.sqrt(5))

    def test_antisymmetry(self):
        groups = [[1.0, 4.0, 2.0], [5.0, 3.0, 8.0]]
        (forward,) = dunn_posthoc(groups)
        (backward,) = dunn_posthoc(groups[::-1])
        self.assertAlmostEqual(forward.z, -backward.z)
        self.assertAlmostEqual(forward.p_raw, backward.p_raw)

    def test_identical_groups(self):
        for comparison in dunn_posthoc([[2, 2], [2, 2], [2, 2]]):
            self.assertEqual(comparison.z, 0.0)
            self.assertEqual(comparison.p_adjusted, 1.0)
            self.assertFalse(comparison.significant)

    def test_matches_scikit_posthocs(self):
        groups = [[1.0, 2.0, 2.0, 3.5], [2.0, 4.0, 5.0], [6.0, 6.0, 7.5, 9.0, 3.5]]
        expected = sp.posthoc_dunn(groups, p_adjust='bonferroni').to_numpy()
        pairs = [(0, 1), (0, 2), (1, 2)]
        for (i, j), comparison in zip(pairs, dunn_posthoc(groups)):
            with self.subTest(pair=(i, j)):
                self.assertAlmostEqual(comparison.p_adjusted, expected[i, j])
                self.assertAlmostEqual(comparison.p_adjusted, min(1.0, 3 * comparison.p_raw))

    def test_unknown_correction(self):
        with self.assertRaises(DomainError):
            dunn_posthoc(SEPARATED, correction='holm')


class NormalityTests(SimpleTestCase):
    def test_normal_quantiles(self):
        n = 50
        sample = sps.norm.ppf((np.arange(1, n + 1) - 0.5) / n)
        result = ks_normality(sample)
        z = np.sort((sample - sample.mean()) / sample.std(ddof=1))
        cdf = sps.norm.cdf(z)
        expected = max(np.max(np.arange(1, n + 1) / n - cdf), np.max(cdf - np.arange(n) / n))
        self.assertAlmostEqual(result.statistic, expected)
        self.assertGreater(result.p_value, 0.9)
        self.assertIn('Lilliefors', result.note)

    def test_affine_invariance(self):
        sample = np.random.default_rng(3).normal(size=30)
        self.assertAlmostEqual(ks_normality(sample).statistic, ks_normality(4.0 * sample - 7.0).statistic)

    def test_two_point_sample(self):
        sample = np.array([0.0] * 10 + [1.0] * 10)
        result = ks_normality(sample)
        n = len(sample)
        cdf = sps.norm.cdf(np.sort((sample - sample.mean()) / sample.std(ddof=1)))
        # the empirical CDF steps only where the value changes
        steps = np.searchsorted(np.sort(sample), np.sort(sample), side='right') / n
        before = np.searchsorted(np.sort(sample), np.sort(sample), side='left') / n
        expected = max(np.max(steps - cdf), np.max(cdf - before))
        self.assertAlmostEqual(result.statistic, expected)
        self.assertAlmostEqual(result.statistic, 0.3351, places=4)
        self.assertLess(result.p_value, 0.05)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            ks_normality([1.0, 2.0, 3.0])
        with self.assertRaises(DomainError):
            ks_normality([2.0] * 6)


def viable_variants():
    return downselect(enumerate_design_space(), default_constraints()).viable


def records_for(variants, value, trials=3):
    return [
        TrialMetrics(spec, trial, value(spec, trial), 1.1, 0.3, 20.0)
        for spec in variants
        for trial in range(1, trials + 1)
    ]


class FactorComparisonTests(SimpleTestCase):
    def setUp(self):
        self.variants = viable_variants()

    def test_degrees_of_freedom(self):
        records = records_for(self.variants, lambda spec, trial: spec.n_cells + 0.1 * trial)
        self.assertEqual(compare_by_factor(records, Metric.PATH, Factor.SIZE).df, 1)
        self.assertEqual(compare_by_factor(records, Metric.PATH, Factor.SHAPE).df, 2)
        self.assertEqual(compare_by_factor(records, Metric.PATH, Factor.CELL_COUNT).df, 2)

    def test_shifted_shape_is_significant(self):
        records = records_for(self.variants, lambda spec, trial: 10.0 * spec.shape.order + 0.01 * spec.n_cells)
        result = compare_by_factor(records, Metric.PATH, Factor.SHAPE)
        self.assertEqual(result.groups, ('Square', 'Rectangle', 'Circle'))
        self.assertEqual(result.sizes, (18, 18, 18))
        self.assertLess(result.p_value, 0.001)
        self.assertTrue(all(c.significant for c in result.pairwise))

    def test_pooling_by_means(self):
        records = records_for(self.variants, lambda spec, trial: float(trial))
        groups = factor_groups(records, Metric.PATH, factor_spec(Factor.SHAPE), Pooling.MEANS)
        self.assertEqual({level: len(values) for level, values in groups.items()},
                         {'Square': 6, 'Rectangle': 6, 'Circle': 6})
        self.assertTrue(all(v == 2.0 for values in groups.values() for v in values))

    def test_unmapped_variant(self):
        records = records_for([ActuatorSpec(CellShape.SQUARE, 3, 14)] + list(self.variants), lambda spec, trial: 1.0)
        with self.assertRaises(DomainError):
            compare_by_factor(records, Metric.PATH, Factor.CELL_COUNT)

    def test_jerk_note(self):
        records = records_for(self.variants, lambda spec, trial: spec.cell_length_p + trial)
        self.assertIn('acceleration magnitude', compare_by_factor(records, Metric.JERK, Factor.SHAPE).note)

    def test_single_level_is_rejected(self):
        records = records_for([v for v in self.variants if v.shape == CellShape.SQUARE], lambda s, t: 1.0)
        with self.assertRaises(DomainError):
            compare_by_factor(records, Metric.PATH, Factor.SHAPE)


class FormattingTests(SimpleTestCase):
    def test_p_values(self):
        self.assertEqual(format_p(0.0004), 'p<0.001')
        self.assertEqual(format_p(0.5), 'p=0.500')

    def test_small_p(self):
        self.assertEqual(format_result(StatResult('kruskal-wallis', 24.7281, 2, 4e-6)), '(χ²(2)=24.728, p<0.001)')
