from actuators.design_space import default_constraints, downselect, enumerate_design_space
from actuators.exceptions import DomainError
from actuators.geometry import DEFAULT_SEAM_MARGIN_CM
from actuators.models import report_key
from actuators.patterns import DEFAULT_CHANNEL_WIDTH_CM, emit_pattern

from ._base import BellowLabCommand, logger, positive_float, variant_arg


class Command(BellowLabCommand):
    help = 'Write 1:1 SVG cut-and-seal patterns for the given variants.'

    def add_arguments(self, parser):
        parser.add_argument('--variant', action='append', type=variant_arg, default=None,
                            help="Variant such as 'square,3,8'; repeatable")
        parser.add_argument('--paper-space', '--design-space', dest='design_space', action='store_true',
                            help='Every viable variant')
        parser.add_argument('--seam-margin', type=positive_float, default=DEFAULT_SEAM_MARGIN_CM)
        parser.add_argument('--channel-width', type=float, default=DEFAULT_CHANNEL_WIDTH_CM)
        self.add_out_argument(parser)

    def run(self, *args, **options):
        specs = list(options['variant'] or ())
        if options['design_space']:
            specs += downselect(enumerate_design_space(), default_constraints()).viable
        if not specs:
            raise DomainError('give --variant or --paper-space')
        out = self.out_dir(options) / 'patterns'
        for spec in sorted(set(specs), key=report_key):
            layout, path = emit_pattern(
                spec,
                out / f"{spec.slug}.svg",
                seam_margin=options['seam_margin'],
                channel_width=options['channel_width'],
            )
            width, height = layout.panel_size
            self.emit(f"{spec.label}: panel {width:.2f} x {height:.2f} cm -> {path.name}")
        logger.info("patterns written to %s", out)
