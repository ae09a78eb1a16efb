"""Domain vocabulary shared by every module.

Nothing here is persisted: the choices classes are used for their labels
and validation, the specs are plain value objects.
"""
from dataclasses import dataclass

from django.db import models

from .exceptions import DomainError


class CellShape(models.TextChoices):
    SQUARE = 'square', 'Square'
    RECTANGLE = 'rectangle', 'Rectangle'
    CIRCLE = 'circle', 'Circle'

    @property
    def order(self):
        return list(type(self)).index(self)


class Phase(models.TextChoices):
    INFLATE = 'inflate', 'Inflate'
    DEFLATE = 'deflate', 'Deflate'


class Completion(models.TextChoices):
    COMPLETE = 'complete', 'Complete'
    INCOMPLETE = 'incomplete', 'Incomplete'


class Screen(models.TextChoices):
    PASS = 'pass', 'Pass'
    MARGINAL = 'marginal', 'Marginal'


DEFAULT_REST_THICKNESS_CM = 0.05
DEFAULT_SEAM_WIDTH_CM = 0.10


def format_cm(value):
    """Render a length the way the published tables write it (3, not 3.0)."""
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


@dataclass(frozen=True)
class ActuatorSpec:
    shape: CellShape
    cell_length_p: float
    n_cells: int
    rest_thickness: float = DEFAULT_REST_THICKNESS_CM
    seam_width: float = DEFAULT_SEAM_WIDTH_CM

    def __post_init__(self):
        object.__setattr__(self, 'shape', CellShape(self.shape))
        object.__setattr__(self, 'cell_length_p', float(self.cell_length_p))
        if self.n_cells < 0 or int(self.n_cells) != self.n_cells:
            raise DomainError(f"n_cells must be a non-negative integer, got {self.n_cells}")
        object.__setattr__(self, 'n_cells', int(self.n_cells))
        if self.rest_thickness <= 0:
            raise DomainError(f"rest_thickness must be positive, got {self.rest_thickness}")
        if self.seam_width < 0:
            raise DomainError(f"seam_width must be non-negative, got {self.seam_width}")

    @property
    def label(self):
        return f"{self.shape.label}-{format_cm(self.cell_length_p)}-{self.n_cells}"

    @property
    def slug(self):
        return f"{self.shape.value}_{format_cm(self.cell_length_p)}_{self.n_cells}"

    @property
    def csv(self):
        return f"{self.shape.value},{format_cm(self.cell_length_p)},{self.n_cells}"

    @property
    def key(self):
        return (self.shape, self.cell_length_p, self.n_cells)

    def __str__(self):
        return self.label


def lattice_key(spec):
    """(shape, p, n) order used by the enumeration."""
    return (spec.shape.order, spec.cell_length_p, spec.n_cells)


def report_key(spec):
    """(p, n, shape) order used by every table and report."""
    return (spec.cell_length_p, spec.n_cells, spec.shape.order)


def parse_variant(text):
    """Parse ``square,3,8`` (also ``Square-3-8``) into an ActuatorSpec."""
    parts = [part.strip() for part in text.replace('-', ',').split(',') if part.strip()]
    if len(parts) != 3:
        raise DomainError(f"variant must look like 'square,3,8', got {text!r}")
    shape, p, n = parts
    try:
        shape = CellShape(shape.lower())
    except ValueError:
        raise DomainError(f"unknown cell shape {shape!r}") from None
    try:
        p = float(p)
        n = int(n)
    except ValueError:
        raise DomainError(f"variant must look like 'square,3,8', got {text!r}") from None
    if p <= 0:
        raise DomainError(f"cell length must be positive, got {p}")
    return ActuatorSpec(shape, p, n)


class Metric(models.TextChoices):
    PATH = 'path', 'Path length (cm)'
    SI = 'si', 'Straightness index'
    JERK = 'jerk', 'Jerk (m/s³)'
    ANGLE = 'angle', 'Flexion range (deg)'

    @property
    def field(self):
        return {
            'path': 'path_length_cm',
            'si': 'straightness_index',
            'jerk': 'mean_abs_jerk_ms3',
            'angle': 'flexion_range_deg',
        }[self.value]
