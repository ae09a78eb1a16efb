"""The 72-variant lattice and the rules that cut it down to 18."""
import itertools
import logging
import math
from dataclasses import dataclass, field

from .exceptions import DomainError
from .geometry import estimated_elongation
from .models import ActuatorSpec, CellShape, Screen, lattice_key

logger = logging.getLogger(__name__)

CELL_LENGTHS_CM = (1, 2, 3, 4)
CELL_COUNTS = (1, 6, 8, 10, 12, 14)
DEFAULT_ATTACH_D_CM = 5.0
DEFAULT_TARGET_ANGLE_DEG = 90.0


def max_cell_dimension(spec):
    # p is the square side, the circle diameter and the long side of the rectangle
    return spec.cell_length_p


@dataclass(frozen=True)
class Constraint:
    id: str
    predicate: object = field(compare=False)
    rationale: str
    anchor: str = ''

    def holds(self, spec, context=None):
        return bool(self.predicate(spec, context or {}))


@dataclass(frozen=True)
class SelectionReport:
    viable: tuple
    rejected: tuple

    @property
    def rejected_ids(self):
        return {spec: ids for spec, ids in self.rejected}

    def rows(self):
        """(spec, viable, violations) for every input, in lattice order."""
        rows = [(spec, True, ()) for spec in self.viable]
        rows += [(spec, False, ids) for spec, ids in self.rejected]
        return sorted(rows, key=lambda row: lattice_key(row[0]))


def enumerate_design_space():
    return [
        ActuatorSpec(shape, p, n)
        for shape, p, n in itertools.product(CellShape, CELL_LENGTHS_CM, CELL_COUNTS)
    ]


def default_constraints():
    return [
        Constraint(
            'C1',
            lambda spec, ctx: max_cell_dimension(spec) <= ctx.get('max_dimension_cm', 4.0),
            'maximum cell dimension at most 4 cm',
            'designs with a cell dimension over 4 cm were ruled out',
        ),
        Constraint(
            'C2',
            lambda spec, ctx: spec.cell_length_p >= ctx.get('min_cell_length_cm', 3.0),
            'cell length at least 3 cm for reliable fabrication',
            'all 2 cm cell length actuators were excluded',
        ),
        Constraint(
            'C3',
            lambda spec, ctx: spec.n_cells >= ctx.get('min_cells', 8),
            'at least 8 cells for the minimum elongation performance',
            '6-cell actuators may not provide the minimum required performance',
        ),
        Constraint(
            'C4',
            lambda spec, ctx: spec.n_cells <= ctx.get('max_cells', 12),
            'at most 12 cells to limit bulk and fill time',
            'more cells make the actuator bulkier',
        ),
    ]


def downselect(specs, constraints, context=None):
    viable, rejected = [], []
    for spec in specs:
        failed = tuple(c.id for c in constraints if not c.holds(spec, context))
        if failed:
            rejected.append((spec, failed))
        else:
            viable.append(spec)
    logger.debug("downselect kept %d of %d variants", len(viable), len(viable) + len(rejected))
    return SelectionReport(viable=tuple(viable), rejected=tuple(rejected))


def required_elongation(theta_deg, d_cm):
    """Arc length the actuator must cover to turn the joint by ``theta_deg``."""
    if theta_deg < 0:
        raise DomainError(f"angle must be non-negative, got {theta_deg}")
    if d_cm <= 0:
        raise DomainError(f"attachment distance must be positive, got {d_cm}")
    return d_cm * math.radians(theta_deg)


def advisory_elongation_screen(spec, table, d_cm=DEFAULT_ATTACH_D_CM, theta_deg=DEFAULT_TARGET_ANGLE_DEG):
    if estimated_elongation(spec, table) >= required_elongation(theta_deg, d_cm):
        return Screen.PASS
    return Screen.MARGINAL
