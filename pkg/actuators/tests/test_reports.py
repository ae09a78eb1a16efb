import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from actuators.design_space import default_constraints, downselect, enumerate_design_space
from actuators.ingest import default_displacement_table, load_pneumatic_config, load_published_fixture
from actuators.metrics import TrialMetrics
from actuators.models import ActuatorSpec, CellShape, Metric
from actuators.pneumatics import OBSERVED_INCOMPLETE, classify_completion
from actuators.reports import FOOTNOTE, compare_all, emit_report, fixture_records, render_report
from actuators.stats import Factor, Pooling


class PublishedReportTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.fixture = load_published_fixture()
        cls.variants = {spec for values in cls.fixture.values() for spec in values}
        table, pneumatic = default_displacement_table(), load_pneumatic_config()
        cls.completion = {spec: classify_completion(spec, table, pneumatic) for spec in cls.variants}
        cls.text = render_report(cls.fixture, variants=cls.variants, completion=cls.completion,
                                 metrics=[m for m in Metric if m in cls.fixture])

    def test_every_published_cell_verbatim(self):
        for metric, values in self.fixture.items():
            for spec, (mean, sd) in values.items():
                flag = '*' if spec in OBSERVED_INCOMPLETE else ''
                with self.subTest(metric=metric, variant=spec.label):
                    self.assertIn(f" {mean:.2f}±{sd:.2f}{flag} |", self.text)

    def test_known_cells(self):
        self.assertIn('| 3cm | 8 | 13.65±0.76 | 12.22±0.74 | 15.31±0.89 |', self.text)
        self.assertIn('| 4cm | 12 | 20.53±0.57* | 17.76±0.72* | 18.90±1.41* |', self.text)

    def test_asterisks_only_on_incomplete_variants(self):
        starred = sum(line.count('*') for line in self.text.splitlines() if line.startswith('| '))
        self.assertEqual(starred, len(OBSERVED_INCOMPLETE) * len(self.fixture))
        self.assertIn(FOOTNOTE, self.text)

    def test_rows_in_size_then_cell_order(self):
        rows = [line.split(' | ')[:2] for line in self.text.splitlines() if line.startswith('| 3cm') or
                line.startswith('| 4cm')]
        self.assertEqual(rows[:6], [['| 3cm', '8'], ['| 3cm', '10'], ['| 3cm', '12'],
                                    ['| 4cm', '8'], ['| 4cm', '10'], ['| 4cm', '12']])

    def test_comparisons_on_published_means(self):
        records = fixture_records(self.fixture)
        comparisons = compare_all(records, [Metric.PATH], pooling=Pooling.MEANS)
        text = render_report(self.fixture, variants=self.variants, comparisons=comparisons, records=records,
                             metrics=[Metric.PATH])
        self.assertIn('## Factor comparisons', text)
        self.assertRegex(text, r'Path length \(cm\), Shape: \(χ²\(2\)=\d+\.\d{3}, p[=<][01]\.\d{3}\)')
        self.assertIn('Size: (χ²(1)=', text)


class CompareAllTests(SimpleTestCase):
    def records(self, *variants):
        return [
            TrialMetrics(spec, trial, 10.0 * spec.shape.order + trial, 1.1, 0.3, 20.0)
            for spec in variants
            for trial in range(1, 6)
        ]

    def test_single_level_factors_are_skipped(self):
        records = self.records(ActuatorSpec(CellShape.SQUARE, 3, 8), ActuatorSpec(CellShape.CIRCLE, 3, 8))
        with self.assertLogs('actuators.reports', 'WARNING') as logs:
            comparisons = compare_all(records, [Metric.PATH])
        self.assertEqual([factor for _, factor, _, _ in comparisons], [Factor.SHAPE])
        self.assertEqual(comparisons[0][3].groups, ('Square', 'Circle'))
        output = '\n'.join(logs.output)
        self.assertIn('size not comparable: only 3 cm present', output)
        self.assertIn('cell count not comparable: only 8-cell present', output)

    def test_report_names_skipped_factors(self):
        records = self.records(ActuatorSpec(CellShape.SQUARE, 3, 8), ActuatorSpec(CellShape.SQUARE, 4, 8))
        with self.assertLogs('actuators.reports', 'WARNING'):
            comparisons = compare_all(records, [Metric.PATH])
        text = render_report({}, comparisons=comparisons, records=records, metrics=[Metric.PATH])
        self.assertIn('- Shape: not comparable (only Square present)', text)
        self.assertIn('- Cell count: not comparable (only 8-cell present)', text)
        self.assertIn('- Path length (cm), Size: (χ²(1)=', text)


class EmptyReportTests(SimpleTestCase):
    def test_no_variants(self):
        text = render_report({})
        self.assertTrue(text.startswith('# '))
        self.assertEqual(text.count('|---|---|---|---|---|'), len(Metric))
        self.assertIn(FOOTNOTE, text)

    def test_missing_values_are_dashes(self):
        spec = ActuatorSpec(CellShape.SQUARE, 3, 8)
        text = render_report({Metric.PATH: {spec: (1.0, 0.1)}}, variants=[spec], metrics=[Metric.PATH])
        self.assertIn('| 3cm | 8 | 1.00±0.10 | - | - |', text)


class EmitReportTests(SimpleTestCase):
    def test_writes_selection_and_tables(self):
        constraints = default_constraints()
        selection = downselect(enumerate_design_space(), constraints)
        with tempfile.TemporaryDirectory() as tmp:
            path, text = emit_report(selection, {}, (), tmp, constraints=constraints)
            self.assertEqual(Path(path).read_text(encoding='utf-8'), text)
        self.assertIn('72 variants enumerated, 18 viable.', text)
        self.assertIn('| Square-1-14 | C2, C4 |', text)
