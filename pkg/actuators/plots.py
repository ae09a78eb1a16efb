"""SVG figures: pressure profiles and end-effector paths, one line per variant."""
import logging
from pathlib import Path

import matplotlib

matplotlib.use('Agg')  # Use non-GUI backend
import matplotlib.pyplot as plt  # noqa: E402

from .exceptions import DomainError, ExportError  # noqa: E402
from .models import report_key  # noqa: E402

logger = logging.getLogger(__name__)

# fixed salt keeps generated element ids stable between runs
plt.rcParams['svg.hashsalt'] = 'bellowlab'
plt.rcParams['svg.fonttype'] = 'none'


def save_svg(fig, path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format='svg', metadata={'Date': None})
    except OSError as exc:
        raise ExportError(f"{path}: {exc.strerror or exc}") from None
    finally:
        plt.close(fig)
    logger.debug("wrote %s", path)
    return path


def plot_pressure(series_by_variant, path):
    if not series_by_variant:
        raise DomainError("no pressure series to plot")
    fig, ax = plt.subplots(figsize=(8, 5))
    for spec in sorted(series_by_variant, key=report_key):
        series = series_by_variant[spec]
        ax.plot(series.t, series.p_kpa, label=spec.label, gid=spec.slug, linewidth=1)
    ax.set_xlabel('Time (s)')
    ax.set_ylabel('Pressure (kPa)')
    ax.set_title('Pressure over one inflation and deflation cycle')
    ax.legend(fontsize='x-small', ncol=3)
    fig.tight_layout()
    return save_svg(fig, path)


def trajectory_figure(traj_by_variant):
    if not traj_by_variant:
        raise DomainError("no trajectories to plot")
    fig, ax = plt.subplots(figsize=(7, 7))
    for spec in sorted(traj_by_variant, key=report_key):
        points = traj_by_variant[spec].end_effector
        ax.plot(points[:, 0], points[:, 1], label=spec.label, gid=spec.slug, linewidth=1)
    ax.set_aspect('equal', adjustable='datalim')
    ax.set_xlabel('x (cm)')
    ax.set_ylabel('y (cm)')
    ax.set_title('End-effector path')
    ax.legend(fontsize='x-small', ncol=3)
    fig.tight_layout()
    return fig, ax


def plot_trajectories(traj_by_variant, path):
    fig, _ = trajectory_figure(traj_by_variant)
    return save_svg(fig, path)


def emit_plots(pressure, trajectories, out_dir):
    out_dir = Path(out_dir)
    return [
        plot_pressure(pressure, out_dir / 'pressure.svg'),
        plot_trajectories(trajectories, out_dir / 'trajectories.svg'),
    ]
