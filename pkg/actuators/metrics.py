"""Kinematic performance metrics.

Every function takes plain arrays so simulated and ingested trajectories go
through the same code.
"""
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegeneratePathError, DomainError
from .models import Metric, report_key

CHORD_TOLERANCE_CM = 1e-9


def _points(positions):
    points = np.asarray(positions, dtype=float)
    if points.ndim != 2:
        raise DomainError("positions must be a sequence of points")
    return points


def path_length(positions):
    points = _points(positions)
    if len(points) < 2:
        raise DomainError(f"path length needs at least 2 samples, got {len(points)}")
    return float(np.linalg.norm(np.diff(points, axis=0), axis=1).sum())


def straightness_index(positions, tolerance=CHORD_TOLERANCE_CM):
    """Path length over the start-to-end chord; 1 for a straight path."""
    points = _points(positions)
    length = path_length(points)
    chord = float(np.linalg.norm(points[-1] - points[0]))
    if chord < tolerance:
        raise DegeneratePathError(f"start and end are {chord:.3g} cm apart")
    return length / chord


def mean_abs_jerk(accel, rate_hz):
    """Mean |d|a|/dt| in m/s³. Vector samples are reduced to their magnitude."""
    a = np.asarray(accel, dtype=float)
    if a.ndim == 2:
        a = np.linalg.norm(a, axis=1)
    if len(a) < 3:
        raise DomainError(f"jerk needs at least 3 samples, got {len(a)}")
    if rate_hz <= 0:
        raise DomainError(f"sample rate must be positive, got {rate_hz}")
    return float(np.mean(np.abs(np.gradient(a, 1.0 / rate_hz))))


def elbow_flexion_angles(shoulder, elbow, end_effector):
    """Vectorised flexion: 0 for a straight arm, 180 minus the elbow's interior angle."""
    upper = np.atleast_2d(np.asarray(shoulder, dtype=float) - np.asarray(elbow, dtype=float))
    fore = np.atleast_2d(np.asarray(end_effector, dtype=float) - np.asarray(elbow, dtype=float))
    if np.any(np.linalg.norm(upper, axis=1) == 0) or np.any(np.linalg.norm(fore, axis=1) == 0):
        raise DomainError("elbow marker coincides with a neighbouring marker")
    cross = upper[:, 0] * fore[:, 1] - upper[:, 1] * fore[:, 0]
    dot = np.einsum('ij,ij->i', upper, fore)
    return 180.0 - np.degrees(np.arctan2(np.abs(cross), dot))


def elbow_flexion_angle(shoulder, elbow, end_effector):
    return float(elbow_flexion_angles(shoulder, elbow, end_effector)[0])


def flexion_segment(traj):
    """Slice of samples during which the elbow flexes.

    Simulated trajectories know where deflation begins; for recorded ones the
    most extended sample marks the start.
    """
    if traj.flexion_start is not None:
        start = traj.flexion_start
    else:
        start = int(np.argmin(elbow_flexion_angles(traj.shoulder, traj.elbow, traj.end_effector)))
    return slice(start, len(traj))


@dataclass(frozen=True)
class TrialMetrics:
    variant: object
    trial_id: int
    path_length_cm: float
    straightness_index: float
    mean_abs_jerk_ms3: float
    flexion_range_deg: float

    def value(self, metric):
        return getattr(self, Metric(metric).field)


def trial_metrics(traj, variant, trial_id, whole_trial=False):
    segment = slice(0, len(traj)) if whole_trial else flexion_segment(traj)
    end_effector = traj.end_effector[segment]
    angles = elbow_flexion_angles(traj.shoulder[segment], traj.elbow[segment], end_effector)
    return TrialMetrics(
        variant=variant,
        trial_id=trial_id,
        path_length_cm=path_length(end_effector),
        straightness_index=straightness_index(end_effector),
        mean_abs_jerk_ms3=mean_abs_jerk(traj.acceleration_magnitude[segment], traj.sample_rate),
        flexion_range_deg=float(angles.max() - angles.min()),
    )


@dataclass(frozen=True)
class VariantSummary:
    variant: object
    n_trials: int
    mean: dict = field(default_factory=dict)
    sd: dict = field(default_factory=dict)

    @property
    def degenerate(self):
        # a single trial has no spread; SD is reported as 0
        return self.n_trials < 2


def summarize(trials):
    grouped = {}
    for record in trials:
        grouped.setdefault(record.variant, []).append(record)
    summaries = []
    for variant in sorted(grouped, key=report_key):
        records = grouped[variant]
        mean, sd = {}, {}
        for metric in Metric:
            values = np.array([r.value(metric) for r in records])
            mean[metric] = float(values.mean())
            sd[metric] = float(values.std(ddof=1)) if len(values) > 1 else 0.0
        summaries.append(VariantSummary(variant=variant, n_trials=len(records), mean=mean, sd=sd))
    return summaries
