from actuators.exceptions import DomainError
from actuators.exports import export_metrics, export_summary
from actuators.ingest import attach_imu, load_metrics_csv, parse_imu_csv, parse_trajectory_csv
from actuators.metrics import summarize, trial_metrics

from ._base import BellowLabCommand, logger, positive_float, variant_arg


class Command(BellowLabCommand):
    help = 'Compute trial metrics from recorded trajectory CSVs, or summarise an existing metrics CSV.'

    def add_arguments(self, parser):
        parser.add_argument('trajectories', nargs='*', help='Trajectory CSVs (t_s,sx,sy,ex,ey,wx,wy), one per trial')
        parser.add_argument('--variant', type=variant_arg, default=None, help='Variant the trajectories belong to')
        parser.add_argument('--imu', nargs='*', default=(), help='IMU CSVs (t_s,ax,ay,az) in trajectory order')
        parser.add_argument('--imu-rate', type=positive_float, default=None, help='Accept this IMU rate as is')
        parser.add_argument('--whole-trial', action='store_true', help='Use every sample, not just the flexion')
        parser.add_argument('--summarize', default=None, metavar='METRICS_CSV',
                            help='Summarise a metrics CSV instead of reading trajectories')
        self.add_out_argument(parser)

    def run(self, *args, **options):
        out = self.out_dir(options)
        if options['summarize']:
            records = load_metrics_csv(options['summarize'])
        else:
            records = self.measure(options)
            export_metrics(records, out / 'metrics.csv')
        summaries = summarize(records)
        export_summary(summaries, out / 'summary.csv')
        for record in records:
            self.emit(
                f"{record.variant.label} trial {record.trial_id}: path {record.path_length_cm:.3f} cm, "
                f"SI {record.straightness_index:.3f}, jerk {record.mean_abs_jerk_ms3:.3f} m/s³, "
                f"angle {record.flexion_range_deg:.2f} deg"
            )
        logger.info("%d trials over %d variants", len(records), len(summaries))

    def measure(self, options):
        paths = options['trajectories']
        if not paths:
            raise DomainError('give trajectory CSVs or --summarize')
        if options['variant'] is None:
            raise DomainError('--variant is required with trajectory CSVs')
        imu_paths = list(options['imu'])
        if imu_paths and len(imu_paths) != len(paths):
            raise DomainError(f"got {len(imu_paths)} IMU files for {len(paths)} trajectories")
        records = []
        for trial, path in enumerate(paths, start=1):
            traj = parse_trajectory_csv(path)
            if imu_paths:
                traj = attach_imu(traj, parse_imu_csv(imu_paths[trial - 1], override_rate_hz=options['imu_rate']))
            records.append(trial_metrics(traj, options['variant'], trial, whole_trial=options['whole_trial']))
        return records
