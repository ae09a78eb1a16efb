from actuators.exports import export_stats
from actuators.ingest import load_metrics_csv
from actuators.models import Metric
from actuators.reports import compare_all
from actuators.stats import Pooling, format_result, ks_normality

from ._base import BellowLabCommand, logger


class Command(BellowLabCommand):
    help = 'Kruskal-Wallis and Dunn comparisons by shape, size and cell count.'

    def add_arguments(self, parser):
        parser.add_argument('--metrics', required=True, help='Metrics CSV written by simulate or metrics')
        parser.add_argument('--metric', action='append', choices=Metric.values, default=None,
                            help='Restrict to these metrics (repeatable)')
        parser.add_argument('--pooling', choices=Pooling.values, default=Pooling.TRIALS)
        parser.add_argument('--alpha', type=float, default=0.05)
        self.add_out_argument(parser)

    def run(self, *args, **options):
        records = load_metrics_csv(options['metrics'])
        metrics = [Metric(m) for m in options['metric']] if options['metric'] else list(Metric)
        entries = compare_all(records, metrics, pooling=options['pooling'], alpha=options['alpha'])
        export_stats(entries, self.out_dir(options) / 'stats.csv')

        for metric in metrics:
            values = [r.value(metric) for r in records]
            if len(values) >= 4 and len(set(values)) > 1:
                ks = ks_normality(values)
                self.emit(f"{metric.label}: KS D={ks.statistic:.3f}, p={ks.p_value:.3f}")
        for metric, factor, _, result in entries:
            self.emit(f"{metric.label} by {factor.label.lower()} {format_result(result)}")
            for c in result.pairwise:
                self.emit(f"  {c.group_a} vs {c.group_b}: z={c.z:.3f}, p={c.p_adjusted:.3f}"
                          + (' *' if c.significant else ''))
        logger.info("%d comparisons over %d records", len(entries), len(records))
