"""Cut-and-seal layouts for fabricating an actuator from two fabric panels.

Coordinates are in cm. Each panel is a strip of n cells; every cell seal is
open where a channel joins it, channels run along the panel's centre line
and the tube port sits on the far edge of the last cell.
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from matplotlib import patches
from matplotlib.figure import Figure

from .exceptions import GeometryError
from .geometry import DEFAULT_SEAM_MARGIN_CM
from .models import CellShape
from .plots import save_svg

logger = logging.getLogger(__name__)

DEFAULT_CHANNEL_WIDTH_CM = 0.5
PANEL_SPACING_CM = 1.0
CM_PER_INCH = 2.54


def cell_size(shape, p):
    """(width, height) of the sealed cavity."""
    if shape == CellShape.RECTANGLE:
        return p, p / 2.0
    return p, p


@dataclass(frozen=True)
class CellSeal:
    center: tuple
    shape: CellShape
    width: float
    height: float
    # the right side always opens, towards the next cell or the port
    gap_left: bool


@dataclass(frozen=True)
class Channel:
    x0: float
    x1: float
    y: float
    width: float


@dataclass(frozen=True)
class Panel:
    origin: tuple
    width: float
    height: float
    seals: tuple
    channels: tuple
    port: tuple

    @property
    def bounds(self):
        x, y = self.origin
        return x, y, x + self.width, y + self.height


@dataclass(frozen=True)
class PatternLayout:
    spec: object
    seam_margin: float
    channel_width: float
    panels: tuple

    @property
    def panel_size(self):
        return self.panels[0].width, self.panels[0].height

    @property
    def document_size(self):
        return max(p.bounds[2] for p in self.panels), max(p.bounds[3] for p in self.panels)


def _panel(spec, seam_margin, channel_width, y0):
    p = spec.cell_length_p
    n = spec.n_cells
    cell_w, cell_h = cell_size(spec.shape, p)
    pitch = p + 2.0 * seam_margin
    width = n * pitch
    height = cell_h + 2.0 * seam_margin
    cy = y0 + height / 2.0
    seals = tuple(
        CellSeal(
            center=(seam_margin + p / 2.0 + i * pitch, cy),
            shape=spec.shape,
            width=cell_w,
            height=cell_h,
            gap_left=i > 0,
        )
        for i in range(n)
    )
    channels = tuple(
        Channel(seals[i].center[0] + p / 2.0, seals[i + 1].center[0] - p / 2.0, cy, channel_width)
        for i in range(n - 1)
    )
    port_channel = Channel(seals[-1].center[0] + p / 2.0, width, cy, channel_width)
    return Panel(
        origin=(0.0, y0),
        width=width,
        height=height,
        seals=seals,
        channels=channels + (port_channel,),
        port=(width, cy),
    )


def pattern_layout(spec, seam_margin=DEFAULT_SEAM_MARGIN_CM, channel_width=DEFAULT_CHANNEL_WIDTH_CM):
    if spec.n_cells < 1:
        raise GeometryError(f"{spec.label} has no cells to lay out")
    if seam_margin <= 0:
        raise GeometryError(f"seam margin must be positive, got {seam_margin}")
    limit = cell_size(spec.shape, spec.cell_length_p)[1]
    if not 0 < channel_width < limit:
        raise GeometryError(
            f"channel width {channel_width} cm must lie strictly between 0 and {limit:g} cm for {spec.label}"
        )
    first = _panel(spec, seam_margin, channel_width, 0.0)
    second = _panel(spec, seam_margin, channel_width, first.height + PANEL_SPACING_CM)
    return PatternLayout(spec=spec, seam_margin=seam_margin, channel_width=channel_width, panels=(first, second))


def seal_polylines(seal, channel_width):
    """Open polylines of a rectangular seal, broken where channels enter."""
    cx, cy = seal.center
    hw, hh, g = seal.width / 2.0, seal.height / 2.0, channel_width / 2.0
    upper = [(cx + hw, cy + g), (cx + hw, cy + hh), (cx - hw, cy + hh), (cx - hw, cy + g)]
    lower = [(cx - hw, cy - g), (cx - hw, cy - hh), (cx + hw, cy - hh), (cx + hw, cy - g)]
    if seal.gap_left:
        return [upper, lower]
    return [upper + lower[1:]]


def seal_arcs(seal, channel_width):
    """(theta1, theta2) pairs in degrees of a circular seal, broken at the channel gaps."""
    half = math.degrees(math.asin(channel_width / seal.width))
    if seal.gap_left:
        return [(half, 180.0 - half), (180.0 + half, 360.0 - half)]
    return [(half, 360.0 - half)]


def _draw(ax, layout):
    w = layout.channel_width
    for k, panel in enumerate(layout.panels):
        ax.add_patch(patches.Rectangle(panel.origin, panel.width, panel.height, fill=False, linewidth=0.8,
                                       gid=f"panel-{k}"))
        for i, seal in enumerate(panel.seals):
            gid = f"seal-{k}-{i}"
            if seal.shape == CellShape.CIRCLE:
                for theta1, theta2 in seal_arcs(seal, w):
                    ax.add_patch(patches.Arc(seal.center, seal.width, seal.height, theta1=theta1, theta2=theta2,
                                             linewidth=0.6, gid=gid))
            else:
                for line in seal_polylines(seal, w):
                    xs, ys = np.array(line).T
                    ax.plot(xs, ys, color='black', linewidth=0.6, gid=gid)
        for j, channel in enumerate(panel.channels):
            for dy in (-channel.width / 2.0, channel.width / 2.0):
                ax.plot([channel.x0, channel.x1], [channel.y + dy] * 2, color='tab:blue', linewidth=0.6,
                        gid=f"channel-{k}-{j}")
        ax.plot(*panel.port, marker='o', color='tab:red', markersize=3, gid=f"port-{k}")


def emit_pattern(spec, out_path, seam_margin=DEFAULT_SEAM_MARGIN_CM, channel_width=DEFAULT_CHANNEL_WIDTH_CM):
    """Lay out both panels and draw them at 1:1 scale."""
    layout = pattern_layout(spec, seam_margin, channel_width)
    width, height = layout.document_size
    fig = Figure(figsize=(width / CM_PER_INCH, height / CM_PER_INCH))
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_xlim(0, width)
    ax.set_ylim(0, height)
    ax.set_axis_off()
    _draw(ax, layout)
    path = save_svg(fig, Path(out_path))
    logger.info("%s pattern: panels %.2f x %.2f cm", spec.label, *layout.panel_size)
    return layout, path
