"""Readers for every file the toolkit consumes.

CSV files go through pandas, rows through the serializers, INI files
through decouple. Every failure comes out as a ParseError or ConfigError
carrying the offending path.
"""
import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path

import numpy as np
import pandas as pd
from decouple import Config, RepositoryIni
from django.conf import settings

from .exceptions import ConfigError, DomainError, ParseError, TrajectoryValidationError
from .geometry import CellDisplacementTable, MeasuredElongationTable
from .kinematics import DEFAULT_SAMPLE_RATE_HZ, Trajectory, finite_difference_acceleration
from .metrics import TrialMetrics
from .models import ActuatorSpec
from .serializers import (
    DisplacementRowSerializer,
    ElongationRowSerializer,
    FixtureRowSerializer,
    PneumaticConfigSerializer,
    TrialMetricsRowSerializer,
    first_error,
)

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ('t_s', 'sx', 'sy', 'ex', 'ey', 'wx', 'wy')
IMU_COLUMNS = ('t_s', 'ax', 'ay', 'az')
PRESSURE_COLUMNS = ('t_s', 'p_kPa')
METRICS_COLUMNS = ('shape', 'p_cm', 'n', 'trial', 'path_cm', 'si', 'jerk_ms3', 'angle_deg')
DISPLACEMENT_COLUMNS = ('shape', 'p_cm', 'delta_cm')
ELONGATION_COLUMNS = ('shape', 'p_cm', 'n', 'elongation_cm')
FIXTURE_COLUMNS = ('metric', 'shape', 'p_cm', 'n', 'mean', 'sd')
PNEUMATIC_KEYS = (
    'steady_pressure_kpa',
    'supply_flow_cm3_s',
    'resistance_square',
    'resistance_rectangle',
    'resistance_circle',
    'completion_fraction',
    'window_s',
)
RATE_TOLERANCE = 0.01


def _line(index):
    # header is line 1
    return int(index) + 2


def read_frame(path, columns, min_rows=0):
    """All cells as strings, header checked against ``columns``."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError:
        raise ParseError(path, 'no such file') from None
    except pd.errors.EmptyDataError:
        raise ParseError(path, 'file is empty', line=1) from None
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise ParseError(path, str(exc).strip()) from None
    header = tuple(str(c).strip() for c in frame.columns)
    if header != tuple(columns):
        raise ParseError(path, f"expected header {','.join(columns)}, got {','.join(header)}", line=1)
    if len(frame) < min_rows:
        raise ParseError(path, f"need at least {min_rows} data rows, got {len(frame)}")
    return frame


def float_columns(frame, path, columns):
    """Columns as float arrays; the first non-finite cell is reported."""
    arrays = {}
    for column in columns:
        values = np.empty(len(frame))
        for i, cell in enumerate(frame[column]):
            try:
                value = float(cell)
            except ValueError:
                value = math.nan
            if not math.isfinite(value):
                raise ParseError(path, f"expected a finite number, got {cell!r}", line=_line(i), column=column)
            values[i] = value
        arrays[column] = values
    return arrays


def validated_rows(frame, serializer_class, path):
    rows = []
    for i, record in enumerate(frame.to_dict('records')):
        serializer = serializer_class(data=record)
        if not serializer.is_valid():
            column, message = first_error(serializer.errors)
            raise ParseError(path, message, line=_line(i), column=column)
        rows.append(serializer.validated_data)
    return rows


def _data_path(name):
    return Path(settings.BELLOWLAB_DATA_DIR) / name


def load_displacement_table(path):
    frame = read_frame(path, DISPLACEMENT_COLUMNS, min_rows=1)
    rows = validated_rows(frame, DisplacementRowSerializer, path)
    entries = {}
    for i, row in enumerate(rows):
        key = (row['shape'], row['p_cm'])
        if key in entries:
            raise ParseError(path, f"duplicate entry for {row['shape'].label}, p={row['p_cm']}", line=_line(i))
        entries[key] = row['delta_cm']
    try:
        return CellDisplacementTable(entries)
    except DomainError as exc:
        raise ParseError(path, str(exc)) from None


@lru_cache(maxsize=1)
def default_displacement_table():
    return load_displacement_table(_data_path('cell_displacement.csv'))


def load_measured_elongation(path):
    frame = read_frame(path, ELONGATION_COLUMNS, min_rows=1)
    rows = validated_rows(frame, ElongationRowSerializer, path)
    try:
        return MeasuredElongationTable({(r['shape'], r['p_cm'], r['n']): r['elongation_cm'] for r in rows})
    except DomainError as exc:
        raise ParseError(path, str(exc)) from None


@lru_cache(maxsize=1)
def default_measured_elongation():
    return load_measured_elongation(_data_path('measured_elongation.csv'))


def load_published_fixture(path=None):
    """Published mean and SD per metric and variant: {metric: {spec: (mean, sd)}}."""
    path = path or _data_path('published_tables.csv')
    frame = read_frame(path, FIXTURE_COLUMNS, min_rows=1)
    fixture = {}
    for row in validated_rows(frame, FixtureRowSerializer, path):
        spec = ActuatorSpec(row['shape'], row['p_cm'], row['n'])
        fixture.setdefault(row['metric'], {})[spec] = (row['mean'], row['sd'])
    return fixture


def load_metrics_csv(path):
    frame = read_frame(path, METRICS_COLUMNS)
    return [
        TrialMetrics(
            variant=ActuatorSpec(row['shape'], row['p_cm'], row['n']),
            trial_id=row['trial'],
            path_length_cm=row['path_cm'],
            straightness_index=row['si'],
            mean_abs_jerk_ms3=row['jerk_ms3'],
            flexion_range_deg=row['angle_deg'],
        )
        for row in validated_rows(frame, TrialMetricsRowSerializer, path)
    ]


def read_settings_ini(path, keys):
    """Values for ``keys`` from the ``[settings]`` section; the environment wins."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{path}: no such config file")
    source = Config(RepositoryIni(str(path)))
    values = {}
    for key in keys:
        value = source(key, default=None)
        if value is not None:
            values[key] = value
    return values


def load_pneumatic_config(path=None):
    path = Path(path or settings.BELLOWLAB_PNEUMATICS)
    serializer = PneumaticConfigSerializer(data=read_settings_ini(path, PNEUMATIC_KEYS))
    if not serializer.is_valid():
        key, message = first_error(serializer.errors)
        raise ConfigError(f"{path}: {key}: {message}")
    return serializer.save()


def _strictly_increasing(t, path):
    steps = np.diff(t)
    if np.any(steps <= 0):
        i = int(np.argmax(steps <= 0)) + 1
        raise TrajectoryValidationError(f"{path}, line {_line(i)}: time stamps must be strictly increasing")
    return steps


def _uniform_grid(t, steps, path):
    dt = float(np.median(steps))
    if np.allclose(steps, dt, rtol=1e-6, atol=1e-12):
        return None, dt
    count = max(int(round((t[-1] - t[0]) / dt)), 1)
    grid = np.linspace(t[0], t[-1], count + 1)
    logger.warning("%s: non-uniform time stamps, resampled to %d samples", path, len(grid))
    return grid, (t[-1] - t[0]) / count


def parse_trajectory_csv(path):
    """Marker positions (cm) of shoulder, elbow and wrist.

    Irregular time stamps are linearly resampled onto a uniform grid spanning
    the same interval; acceleration is derived from the wrist marker.
    """
    frame = read_frame(path, TRAJECTORY_COLUMNS, min_rows=2)
    data = float_columns(frame, path, TRAJECTORY_COLUMNS)
    t = data['t_s']
    steps = _strictly_increasing(t, path)
    grid, dt = _uniform_grid(t, steps, path)
    markers = {}
    for name, (x, y) in {'shoulder': ('sx', 'sy'), 'elbow': ('ex', 'ey'), 'end_effector': ('wx', 'wy')}.items():
        if grid is None:
            markers[name] = np.column_stack([data[x], data[y]])
        else:
            markers[name] = np.column_stack([np.interp(grid, t, data[x]), np.interp(grid, t, data[y])])
    planar = finite_difference_acceleration(markers['end_effector'], dt)
    return Trajectory(
        t=t if grid is None else grid,
        acceleration=np.column_stack([planar, np.zeros(len(planar))]),
        sample_rate=1.0 / dt,
        label=Path(path).stem,
        **markers,
    )


@dataclass(frozen=True, eq=False)
class ImuSeries:
    t: np.ndarray
    acceleration: np.ndarray
    rate_hz: float

    def __len__(self):
        return len(self.t)

    @property
    def magnitude(self):
        return np.linalg.norm(self.acceleration, axis=1)


def parse_imu_csv(path, expected_rate_hz=DEFAULT_SAMPLE_RATE_HZ, override_rate_hz=None):
    """Three-axis acceleration in m/s².

    The rate comes from the median sample spacing and must sit within 1% of
    ``expected_rate_hz`` unless ``override_rate_hz`` is given.
    """
    frame = read_frame(path, IMU_COLUMNS, min_rows=2)
    data = float_columns(frame, path, IMU_COLUMNS)
    steps = _strictly_increasing(data['t_s'], path)
    rate = 1.0 / float(np.median(steps))
    if override_rate_hz is not None:
        rate = float(override_rate_hz)
    elif abs(rate - expected_rate_hz) > RATE_TOLERANCE * expected_rate_hz:
        raise TrajectoryValidationError(
            f"{path}: sample rate {rate:.3f} Hz differs from {expected_rate_hz:g} Hz by more than 1%"
        )
    acceleration = np.column_stack([data['ax'], data['ay'], data['az']])
    return ImuSeries(data['t_s'], acceleration, rate)


def attach_imu(traj, imu):
    """Replace derived acceleration with recorded IMU samples on the trajectory's clock."""
    if len(imu) == len(traj) and np.allclose(imu.t, traj.t):
        acceleration = imu.acceleration
    else:
        acceleration = np.column_stack([np.interp(traj.t, imu.t, imu.acceleration[:, k]) for k in range(3)])
    return replace(traj, acceleration=acceleration)


def load_pressure_csv(path):
    frame = read_frame(path, PRESSURE_COLUMNS, min_rows=2)
    data = float_columns(frame, path, PRESSURE_COLUMNS)
    _strictly_increasing(data['t_s'], path)
    return data['t_s'], data['p_kPa']
