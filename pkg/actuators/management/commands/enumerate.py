from actuators.design_space import enumerate_design_space
from actuators.exports import export_enumeration
from actuators.models import lattice_key

from ._base import BellowLabCommand, logger


class Command(BellowLabCommand):
    help = 'List every variant of the design lattice (shape, cell length, cell count).'

    def add_arguments(self, parser):
        parser.add_argument('--paper-space', '--design-space', dest='design_space', action='store_true',
                            help='3 shapes x p in {1,2,3,4} cm x n in {1,6,8,10,12,14} (the only space available)')
        self.add_out_argument(parser)

    def run(self, *args, **options):
        specs = sorted(enumerate_design_space(), key=lattice_key)
        path = export_enumeration(specs, self.out_dir(options) / 'enumerate.csv')
        for spec in specs:
            self.emit(spec.csv)
        logger.info("%d variants written to %s", len(specs), path)
