"""Quasi-static geometry of a multi-cell bellow actuator.

Per-cell displacement is consumed as tabulated data; every other quantity
(elongation, rest length, cavity volume, mass) is derived from it and the
cell parameters.
"""
import logging
import math
from collections.abc import Mapping

import numpy as np

from .exceptions import DomainError, MissingEntryError
from .models import CellShape

logger = logging.getLogger(__name__)

DEFAULT_SEAM_MARGIN_CM = 0.5
# g/cm², result of calibrate_areal_density over the 18 viable variants
DEFAULT_AREAL_DENSITY = 0.014
MASS_BAND_G = (3.5, 28.0)
ELONGATION_RATIO_BAND = (5.0, 15.0)
LENS_FACTOR = 2.0 / 3.0


def cross_section_area(shape, p):
    """Inner cavity cross-section of one cell in cm²."""
    if p <= 0:
        raise DomainError(f"cell length must be positive, got {p}")
    shape = CellShape(shape)
    if shape == CellShape.SQUARE:
        return p * p
    if shape == CellShape.RECTANGLE:
        return p * (p / 2.0)
    return math.pi * p * p / 4.0


class CellDisplacementTable(Mapping):
    """Maximum displacement of a single cell, keyed by (shape, p)."""

    name = 'cell displacement table'

    def __init__(self, entries):
        self._entries = {}
        for (shape, p), delta in entries.items():
            key = (CellShape(shape), float(p))
            if key in self._entries:
                raise DomainError(f"duplicate displacement entry for {key}")
            if not delta > 0:
                raise DomainError(f"displacement for {key} must be positive, got {delta}")
            self._entries[key] = float(delta)
        for shape in CellShape:
            rows = sorted((p, d) for (s, p), d in self._entries.items() if s == shape)
            for (p0, d0), (p1, d1) in zip(rows, rows[1:]):
                if d1 <= d0:
                    raise DomainError(
                        f"displacement must increase with cell length for {shape.label}: "
                        f"p={p0} gives {d0}, p={p1} gives {d1}"
                    )

    def __getitem__(self, key):
        shape, p = key
        try:
            return self._entries[(CellShape(shape), float(p))]
        except (KeyError, ValueError):
            raise MissingEntryError(self.name, (str(shape), p)) from None

    def __iter__(self):
        return iter(sorted(self._entries, key=lambda k: (k[0].order, k[1])))

    def __len__(self):
        return len(self._entries)


class MeasuredElongationTable(Mapping):
    """Elongation measured on fabricated actuators, keyed by (shape, p, n)."""

    name = 'measured elongation table'

    def __init__(self, entries):
        self._entries = {}
        for (shape, p, n), value in entries.items():
            key = (CellShape(shape), float(p), int(n))
            if value < 0:
                raise DomainError(f"elongation for {key} must be non-negative, got {value}")
            self._entries[key] = float(value)

    def __getitem__(self, key):
        shape, p, n = key
        try:
            return self._entries[(CellShape(shape), float(p), int(n))]
        except (KeyError, ValueError):
            raise MissingEntryError(self.name, (str(shape), p, n)) from None

    def __iter__(self):
        return iter(sorted(self._entries, key=lambda k: (k[0].order, k[1], k[2])))

    def __len__(self):
        return len(self._entries)


def per_cell_displacement(table, shape, p):
    return table[(shape, p)]


def estimated_elongation(spec, table):
    """Free elongation of the whole actuator: cells add up linearly."""
    return spec.n_cells * per_cell_displacement(table, spec.shape, spec.cell_length_p)


def measured_elongation(spec, measured):
    return measured[(spec.shape, spec.cell_length_p, spec.n_cells)]


def rest_length(spec):
    return spec.n_cells * (spec.rest_thickness + spec.seam_width)


def elongation_ratio(spec, elongation_cm):
    length = rest_length(spec)
    if length <= 0:
        raise DomainError(f"{spec.label} has no rest length")
    return elongation_cm / length


def inflated_cell_volume(spec, table, fill_fraction):
    """Cavity volume of one cell, lens-approximated, in cm³."""
    if not 0.0 <= fill_fraction <= 1.0:
        raise DomainError(f"fill fraction must lie in [0, 1], got {fill_fraction}")
    area = cross_section_area(spec.shape, spec.cell_length_p)
    delta = per_cell_displacement(table, spec.shape, spec.cell_length_p)
    return LENS_FACTOR * area * (spec.rest_thickness + fill_fraction * delta)


def total_inflated_volume(spec, table):
    return spec.n_cells * inflated_cell_volume(spec, table, 1.0)


def estimate_mass(spec, areal_density=DEFAULT_AREAL_DENSITY, seam_margin=DEFAULT_SEAM_MARGIN_CM):
    """Two fabric panels per cell, each cut with a seam margin all round."""
    if areal_density <= 0:
        raise DomainError(f"areal density must be positive, got {areal_density}")
    side = spec.cell_length_p + 2.0 * seam_margin
    return 2.0 * spec.n_cells * side * side * areal_density


def calibrate_areal_density(specs, band=MASS_BAND_G, grid=None, seam_margin=DEFAULT_SEAM_MARGIN_CM):
    """Smallest grid density that puts every variant's mass inside ``band``."""
    specs = list(specs)
    if not specs:
        raise DomainError("need at least one variant to calibrate the mass model")
    if grid is None:
        grid = np.round(np.arange(0.001, 0.1, 0.001), 6)
    low, high = band
    for density in grid:
        masses = [estimate_mass(spec, density, seam_margin) for spec in specs]
        if min(masses) >= low and max(masses) <= high:
            logger.info("areal density %.4f g/cm² gives masses %.2f-%.2f g", density, min(masses), max(masses))
            return float(density)
    raise DomainError(f"no areal density in the grid places all masses inside {band} g")
