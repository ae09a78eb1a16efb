from actuators.design_space import default_constraints, downselect, enumerate_design_space
from actuators.exports import write_pneumatic_config
from actuators.geometry import calibrate_areal_density
from actuators.models import CellShape, report_key
from actuators.pneumatics import (
    PneumaticConfig,
    calibrate_resistances,
    incomplete_variants,
    observed_targets,
    volume_only_evidence,
)

from ._base import BellowLabCommand, logger


class Command(BellowLabCommand):
    help = 'Fit the per-shape flow resistances and supply flow to the observed incomplete inflations.'

    def add_arguments(self, parser):
        parser.add_argument('--write', default=None, metavar='INI',
                            help='Where to write the calibrated config (default: <out>/pneumatics.ini)')
        parser.add_argument('--displacement', default=None, help='Per-cell displacement CSV')
        self.add_out_argument(parser)

    def run(self, *args, **options):
        table = self.displacement_table(options)
        viable = downselect(enumerate_design_space(), default_constraints()).viable
        flagged, unflagged = observed_targets(viable)

        cfg = calibrate_resistances(flagged, unflagged, table, base=PneumaticConfig())
        path = write_pneumatic_config(cfg, options['write'] or self.out_dir(options) / 'pneumatics.ini')
        evidence = volume_only_evidence(flagged, unflagged, table)

        self.emit(
            f"resistance circle={cfg.resistance(CellShape.CIRCLE)} "
            f"rectangle={cfg.resistance(CellShape.RECTANGLE)} square={cfg.resistance(CellShape.SQUARE)}"
        )
        self.emit(f"supply flow {cfg.supply_flow} cm³/s")
        self.emit('incomplete: ' + ', '.join(s.label for s in sorted(incomplete_variants(viable, table, cfg),
                                                                     key=report_key)))
        verdict = 'feasible' if evidence.feasible else 'infeasible'
        self.emit(
            f"volume-only model: {verdict} ({evidence.points_tried} grid points, "
            f"at best {evidence.min_violations} misclassified)"
        )
        self.emit(f"areal density {calibrate_areal_density(viable):.3f} g/cm²")
        logger.info("calibrated config written to %s", path)
