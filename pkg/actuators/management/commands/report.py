from actuators.design_space import default_constraints, downselect, enumerate_design_space
from actuators.exceptions import DomainError
from actuators.ingest import default_measured_elongation, load_metrics_csv, load_published_fixture
from actuators.metrics import summarize
from actuators.models import Metric
from actuators.pneumatics import classify_completion
from actuators.reports import compare_all, emit_report, fixture_records, summary_table
from actuators.stats import Pooling

from ._base import BellowLabCommand, logger


class Command(BellowLabCommand):
    help = 'Write the markdown report: elongation, pneumatics, metric tables and factor comparisons.'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--metrics', default=None, help='Metrics CSV written by simulate or metrics')
        source.add_argument('--published', nargs='?', const='', default=None, metavar='CSV',
                            help='Published mean±SD tables (default: the bundled fixture)')
        parser.add_argument('--pooling', choices=Pooling.values, default=None)
        self.add_table_arguments(parser)
        self.add_out_argument(parser)

    def run(self, *args, **options):
        constraints = default_constraints()
        selection = downselect(enumerate_design_space(), constraints)
        table = self.displacement_table(options)
        pneumatic = self.pneumatic_config(options)

        if options['published'] is not None:
            fixture = load_published_fixture(options['published'] or None)
            metric_values = fixture
            metrics = [m for m in Metric if m in fixture]
            records = fixture_records(fixture)
            pooling = options['pooling'] or Pooling.MEANS
            variants = {spec for values in fixture.values() for spec in values}
        else:
            records = load_metrics_csv(options['metrics'])
            if not records:
                raise DomainError(f"{options['metrics']} holds no trials")
            metric_values = summary_table(summarize(records))
            metrics = list(Metric)
            pooling = options['pooling'] or Pooling.TRIALS
            variants = {r.variant for r in records}
        if pooling == Pooling.TRIALS and options['published'] is not None:
            raise DomainError('the published tables hold one mean per variant; use --pooling means')

        completion = {spec: classify_completion(spec, table, pneumatic) for spec in variants}
        _, text = emit_report(
            selection,
            metric_values,
            compare_all(records, metrics, pooling=pooling),
            self.out_dir(options),
            variants=variants,
            completion=completion,
            constraints=constraints,
            table=table,
            measured=default_measured_elongation(),
            pneumatic=pneumatic,
            records=records,
            metrics=metrics,
        )
        self.emit(text)
        logger.info("report covers %d variants", len(variants))
