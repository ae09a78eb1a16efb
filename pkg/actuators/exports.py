"""CSV and INI writers.

Floats are written at full precision so every file reads back to the same
doubles; rows are always sorted before writing.
"""
import configparser
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import ExportError
from .ingest import IMU_COLUMNS, METRICS_COLUMNS, PRESSURE_COLUMNS, TRAJECTORY_COLUMNS
from .models import CellShape, Metric, format_cm, report_key

logger = logging.getLogger(__name__)


def write_frame(frame, path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator='\n')
    except OSError as exc:
        raise ExportError(f"{path}: {exc.strerror or exc}") from None
    logger.debug("wrote %s (%d rows)", path, len(frame))
    return path


def _spec_columns(spec):
    return {'shape': spec.shape.value, 'p_cm': format_cm(spec.cell_length_p), 'n': spec.n_cells}


def export_trajectory(traj, path):
    frame = pd.DataFrame(
        np.column_stack([traj.t, traj.shoulder, traj.elbow, traj.end_effector]),
        columns=TRAJECTORY_COLUMNS,
    )
    return write_frame(frame, path)


def export_imu(traj, path):
    frame = pd.DataFrame(np.column_stack([traj.t, traj.acceleration]), columns=IMU_COLUMNS)
    return write_frame(frame, path)


def export_pressure(series, path):
    frame = pd.DataFrame(np.column_stack([series.t, series.p_kpa]), columns=PRESSURE_COLUMNS)
    return write_frame(frame, path)


def export_metrics(records, path):
    records = sorted(records, key=lambda r: (report_key(r.variant), r.trial_id))
    frame = pd.DataFrame(
        [
            {
                **_spec_columns(r.variant),
                'trial': r.trial_id,
                'path_cm': r.path_length_cm,
                'si': r.straightness_index,
                'jerk_ms3': r.mean_abs_jerk_ms3,
                'angle_deg': r.flexion_range_deg,
            }
            for r in records
        ],
        columns=METRICS_COLUMNS,
    )
    return write_frame(frame, path)


def export_summary(summaries, path):
    columns = ['shape', 'p_cm', 'n', 'trials']
    for metric in Metric:
        columns += [f"{metric.value}_mean", f"{metric.value}_sd"]
    rows = []
    for summary in summaries:
        row = {**_spec_columns(summary.variant), 'trials': summary.n_trials}
        for metric in Metric:
            row[f"{metric.value}_mean"] = summary.mean[metric]
            row[f"{metric.value}_sd"] = summary.sd[metric]
        rows.append(row)
    return write_frame(pd.DataFrame(rows, columns=columns), path)


def export_enumeration(specs, path):
    frame = pd.DataFrame([_spec_columns(s) for s in specs], columns=['shape', 'p_cm', 'n'])
    return write_frame(frame, path)


def export_selection(report, path):
    frame = pd.DataFrame(
        [
            {**_spec_columns(spec), 'viable': 'true' if viable else 'false', 'violations': ';'.join(ids)}
            for spec, viable, ids in report.rows()
        ],
        columns=['shape', 'p_cm', 'n', 'viable', 'violations'],
    )
    return write_frame(frame, path)


def export_advisory(rows, path):
    """``rows``: (spec, estimated_cm, required_cm, screen)."""
    frame = pd.DataFrame(
        [
            {**_spec_columns(spec), 'estimated_cm': est, 'required_cm': req, 'screen': screen.value}
            for spec, est, req, screen in rows
        ],
        columns=['shape', 'p_cm', 'n', 'estimated_cm', 'required_cm', 'screen'],
    )
    return write_frame(frame, path)


def export_stats(entries, path):
    """``entries``: (metric, factor, pooling, StatResult) tuples, one row per pairwise comparison."""
    rows = []
    for metric, factor, pooling, result in entries:
        base = {
            'metric': metric.value,
            'factor': factor.value,
            'pooling': pooling,
            'h': result.statistic,
            'df': result.df,
            'p': result.p_value,
        }
        for c in result.pairwise:
            rows.append({
                **base,
                'group_a': c.group_a,
                'group_b': c.group_b,
                'z': c.z,
                'p_raw': c.p_raw,
                'p_adjusted': c.p_adjusted,
                'significant': 'true' if c.significant else 'false',
            })
    columns = ['metric', 'factor', 'pooling', 'h', 'df', 'p', 'group_a', 'group_b', 'z', 'p_raw', 'p_adjusted',
               'significant']
    return write_frame(pd.DataFrame(rows, columns=columns), path)


def write_pneumatic_config(cfg, path):
    parser = configparser.ConfigParser()
    parser['settings'] = {
        'steady_pressure_kpa': repr(cfg.steady_pressure_kpa),
        'supply_flow_cm3_s': repr(float(cfg.supply_flow)),
        'resistance_square': repr(cfg.resistance(CellShape.SQUARE)),
        'resistance_rectangle': repr(cfg.resistance(CellShape.RECTANGLE)),
        'resistance_circle': repr(cfg.resistance(CellShape.CIRCLE)),
        'completion_fraction': repr(cfg.completion_fraction),
        'window_s': repr(cfg.window_s),
    }
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', encoding='utf-8', newline='\n') as handle:
            parser.write(handle)
    except OSError as exc:
        raise ExportError(f"{path}: {exc.strerror or exc}") from None
    return path
