from actuators.experiment import ExperimentConfig, load_experiment_config, run_experiment, with_overrides
from actuators.exports import export_imu, export_metrics, export_pressure, export_summary, export_trajectory
from actuators.metrics import summarize
from actuators.models import Completion, Metric
from actuators.plots import emit_plots

from ._base import BellowLabCommand, logger, positive_float, variant_arg


class Command(BellowLabCommand):
    help = 'Simulate repeated inflate/deflate trials and write trajectories, IMU series and metrics.'

    def add_arguments(self, parser):
        parser.add_argument('--variant', action='append', type=variant_arg, default=None,
                            help="Variant such as 'square,3,8'; repeatable (default: the 18 viable variants)")
        parser.add_argument('--config', default=None, help='Experiment INI file')
        parser.add_argument('--trials', type=int, default=None)
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--phase-s', type=positive_float, default=None)
        parser.add_argument('--sigma-pos', type=float, default=None, help='Marker noise SD in cm')
        parser.add_argument('--sigma-acc', type=float, default=None, help='Accelerometer noise SD in m/s²')
        parser.add_argument('--elongation-source', choices=('measured', 'estimated'), default=None)
        self.add_table_arguments(parser)
        self.add_out_argument(parser)

    def experiment_config(self, options):
        cfg = load_experiment_config(options['config']) if options['config'] else ExperimentConfig()
        return with_overrides(
            cfg,
            variants=tuple(options['variant']) if options['variant'] else None,
            trials=options['trials'],
            seed=options['seed'],
            phase_s=options['phase_s'],
            sigma_pos_cm=options['sigma_pos'],
            sigma_acc=options['sigma_acc'],
            elongation_source=options['elongation_source'],
            pneumatics=options['pneumatics'],
        )

    def run(self, *args, **options):
        cfg = self.experiment_config(options)
        if options['out'] is None and cfg.out_dir:
            options['out'] = cfg.out_dir
        out = self.out_dir(options)
        table = self.displacement_table(options)
        result = run_experiment(cfg, table=table)

        for (spec, trial), traj in result.trajectories.items():
            name = f"{spec.slug}_t{trial:02d}.csv"
            export_trajectory(traj, out / 'trajectories' / name)
            export_imu(traj, out / 'imu' / name)
        for spec, series in result.pressure.items():
            export_pressure(series, out / 'pressure' / f"{spec.slug}.csv")
        export_metrics(result.metrics, out / 'metrics.csv')
        summaries = summarize(result.metrics)
        export_summary(summaries, out / 'summary.csv')
        emit_plots(result.pressure, {spec: result.trajectories[(spec, 1)] for spec in result.variants}, out)

        for summary in summaries:
            flag = '*' if result.completion[summary.variant] == Completion.INCOMPLETE else ''
            parts = [f"{metric.value} {summary.mean[metric]:.2f}±{summary.sd[metric]:.2f}" for metric in Metric]
            self.emit(f"{summary.variant.label}{flag}: " + ', '.join(parts))
        logger.info("outputs written to %s", out)
