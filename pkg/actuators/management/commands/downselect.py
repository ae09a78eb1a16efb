from actuators.design_space import (
    advisory_elongation_screen,
    default_constraints,
    downselect,
    enumerate_design_space,
    required_elongation,
)
from actuators.exports import export_advisory, export_selection
from actuators.geometry import estimated_elongation
from actuators.models import lattice_key, report_key

from ._base import BellowLabCommand, logger, positive_float, variant_arg


class Command(BellowLabCommand):
    help = 'Apply the design constraints to the lattice and list the viable variants.'

    def add_arguments(self, parser):
        parser.add_argument('--paper-space', '--design-space', dest='design_space', action='store_true',
                            help='Filter the full 72-variant lattice (default when no --variant is given)')
        parser.add_argument('--variant', action='append', type=variant_arg, default=None,
                            help="Variant such as 'square,3,8'; repeatable")
        parser.add_argument('--d-cm', type=positive_float, default=5.0, help='Attachment distance for the screen')
        parser.add_argument('--theta-deg', type=positive_float, default=90.0, help='Target angle for the screen')
        parser.add_argument('--displacement', default=None, help='Per-cell displacement CSV')
        self.add_out_argument(parser)

    def run(self, *args, **options):
        out = self.out_dir(options)
        specs = list(options['variant'] or ())
        if options['design_space'] or not specs:
            specs += enumerate_design_space()
        report = downselect(sorted(set(specs), key=lattice_key), default_constraints())
        viable = sorted(report.viable, key=report_key)
        export_selection(report, out / 'downselect.csv')

        table = self.displacement_table(options)
        required = required_elongation(options['theta_deg'], options['d_cm'])
        rows = [
            (spec, estimated_elongation(spec, table), required,
             advisory_elongation_screen(spec, table, options['d_cm'], options['theta_deg']))
            for spec in viable
        ]
        export_advisory(rows, out / 'advisory.csv')

        for spec in viable:
            self.emit(spec.csv)
        logger.info("%d of %d variants viable", len(report.viable), len(report.viable) + len(report.rejected))
