"""Planar two-link arm driven by an elongating actuator strapped across the elbow.

Flexion rotates the forearm counter-clockwise away from the straight pose.
Deflation flexes the elbow, inflation extends it.
"""
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import DomainError, TrajectoryValidationError
from .geometry import estimated_elongation
from .pneumatics import cycle_profile

logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_RATE_HZ = 60.0
MAX_ATTACH_D_CM = 5.0
RIGID_LINK_TOLERANCE_CM = 1e-9


@dataclass(frozen=True)
class ArmModel:
    upper_arm_cm: float = 15.0
    forearm_cm: float = 11.0
    forearm_mass_kg: float = 0.38
    passive_rom_deg: float = 105.0
    attach_d_cm: float = 5.0
    shoulder_origin: tuple = (0.0, 0.0)
    upper_arm_direction: tuple = (0.0, -1.0)
    # share of the actuator's elongation that reaches the joint arc; 1.0 is the
    # pure arc model, experiments use experiment.STRAPPED_TRANSMISSION
    transmission: float = 1.0

    def __post_init__(self):
        if self.upper_arm_cm <= 0 or self.forearm_cm <= 0:
            raise DomainError("link lengths must be positive")
        if self.forearm_mass_kg <= 0:
            raise DomainError("forearm mass must be positive")
        if not 0 < self.passive_rom_deg <= 180:
            raise DomainError(f"passive range of motion must lie in (0, 180], got {self.passive_rom_deg}")
        if not 0 < self.attach_d_cm <= min(MAX_ATTACH_D_CM, self.upper_arm_cm, self.forearm_cm):
            raise DomainError(
                f"attachment distance must lie in (0, {min(MAX_ATTACH_D_CM, self.upper_arm_cm, self.forearm_cm)}], "
                f"got {self.attach_d_cm}"
            )
        if not 0 < self.transmission <= 1:
            raise DomainError(f"transmission must lie in (0, 1], got {self.transmission}")
        direction = np.asarray(self.upper_arm_direction, dtype=float)
        norm = np.hypot(*direction)
        if norm == 0:
            raise DomainError("upper arm direction must be non-zero")
        object.__setattr__(self, 'upper_arm_direction', tuple(float(v) for v in direction / norm))
        object.__setattr__(self, 'shoulder_origin', tuple(float(v) for v in self.shoulder_origin))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Marker positions in cm, acceleration in m/s² (three axes)."""

    t: np.ndarray
    shoulder: np.ndarray
    elbow: np.ndarray
    end_effector: np.ndarray
    acceleration: np.ndarray
    sample_rate: float = DEFAULT_SAMPLE_RATE_HZ
    flexion_start: int | None = None
    label: str = ''

    def __post_init__(self):
        n = len(self.t)
        for name in ('shoulder', 'elbow', 'end_effector'):
            if getattr(self, name).shape != (n, 2):
                raise TrajectoryValidationError(f"{name} must hold {n} planar points")
        if self.acceleration.shape != (n, 3):
            raise TrajectoryValidationError(f"acceleration must hold {n} three-axis samples")
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise TrajectoryValidationError("time stamps must be strictly increasing")
        if self.flexion_start is not None and not 0 <= self.flexion_start < max(n, 1):
            raise TrajectoryValidationError(f"flexion start {self.flexion_start} outside 0..{n - 1}")

    def __len__(self):
        return len(self.t)

    @property
    def dt(self):
        return 1.0 / self.sample_rate

    @property
    def acceleration_magnitude(self):
        return np.linalg.norm(self.acceleration, axis=1)


def angle_from_elongation(e_cm, d_cm):
    if e_cm < 0:
        raise DomainError(f"elongation must be non-negative, got {e_cm}")
    if d_cm <= 0:
        raise DomainError(f"attachment distance must be positive, got {d_cm}")
    return math.degrees(e_cm / d_cm)


def active_flexion_angle(elongation_cm, arm):
    """Flexion at full deflation, stopped by the joint's passive range."""
    return min(angle_from_elongation(arm.transmission * elongation_cm, arm.attach_d_cm), arm.passive_rom_deg)


def _rotate(vectors, theta_rad):
    c, s = np.cos(theta_rad), np.sin(theta_rad)
    x, y = vectors[..., 0], vectors[..., 1]
    return np.stack([c * x - s * y, s * x + c * y], axis=-1)


def _pose(arm, theta_deg):
    theta = np.atleast_1d(np.asarray(theta_deg, dtype=float))
    if np.any(theta < 0) or np.any(theta > arm.passive_rom_deg):
        raise DomainError(f"flexion angle must lie in [0, {arm.passive_rom_deg}]")
    u = np.asarray(arm.upper_arm_direction)
    shoulder = np.broadcast_to(np.asarray(arm.shoulder_origin), (len(theta), 2)).copy()
    elbow = shoulder + arm.upper_arm_cm * u
    forearm = _rotate(np.broadcast_to(u, (len(theta), 2)), np.radians(theta))
    return shoulder, elbow, elbow + arm.forearm_cm * forearm


def forward_kinematics(arm, theta_deg):
    shoulder, elbow, end_effector = _pose(arm, theta_deg)
    return shoulder[0], elbow[0], end_effector[0]


def finite_difference_acceleration(positions_cm, dt):
    """Second central differences in m/s², edges repeated from their neighbours."""
    x = np.asarray(positions_cm, dtype=float) / 100.0
    acc = np.zeros_like(x)
    if len(x) >= 3:
        acc[1:-1] = (x[2:] - 2.0 * x[1:-1] + x[:-2]) / (dt * dt)
        acc[0] = acc[1]
        acc[-1] = acc[-2]
    return acc


def simulate_trial(spec, table, pneu_cfg, arm, phase_s=5.0, dt_s=1.0 / DEFAULT_SAMPLE_RATE_HZ, elongation=None):
    """One inflate/deflate cycle, sampled every ``dt_s``.

    The joint angle follows the pressure: theta = Theta_active * (1 - p/p_ss),
    so the arm starts flexed, extends while inflating and flexes back while
    deflating. ``elongation`` overrides the tabulated estimate.
    """
    if elongation is None:
        elongation = estimated_elongation(spec, table)
    theta_max = active_flexion_angle(elongation, arm)
    pressure = cycle_profile(spec, table, pneu_cfg, phase_s=phase_s, dt_s=dt_s)
    fill = np.clip(pressure.p_kpa / pneu_cfg.steady_pressure_kpa, 0.0, 1.0)
    theta = theta_max * (1.0 - fill)
    shoulder, elbow, end_effector = _pose(arm, theta)
    planar = finite_difference_acceleration(end_effector, dt_s)
    acceleration = np.column_stack([planar, np.zeros(len(planar))])
    return Trajectory(
        t=pressure.t,
        shoulder=shoulder,
        elbow=elbow,
        end_effector=end_effector,
        acceleration=acceleration,
        sample_rate=1.0 / dt_s,
        flexion_start=int(round(phase_s / dt_s)),
        label=spec.label,
    )


def add_noise(traj, seed, sigma_pos_cm=1e-4, sigma_acc=0.02):
    """Marker and accelerometer noise, reproducible from ``seed``.

    ``seed`` may be an int or a ``numpy.random.SeedSequence``.
    """
    if sigma_pos_cm < 0 or sigma_acc < 0:
        raise DomainError("noise levels must be non-negative")
    if sigma_pos_cm == 0 and sigma_acc == 0:
        return traj
    rng = np.random.default_rng(seed)
    n = len(traj)
    markers = {
        name: getattr(traj, name) + rng.normal(0.0, sigma_pos_cm, (n, 2)) if sigma_pos_cm else getattr(traj, name)
        for name in ('shoulder', 'elbow', 'end_effector')
    }
    acceleration = traj.acceleration + rng.normal(0.0, sigma_acc, (n, 3)) if sigma_acc else traj.acceleration
    return replace(traj, acceleration=acceleration, **markers)


def link_length_errors(traj, arm):
    """Largest deviation of either link from its nominal length, in cm."""
    upper = np.abs(np.linalg.norm(traj.elbow - traj.shoulder, axis=1) - arm.upper_arm_cm)
    fore = np.abs(np.linalg.norm(traj.end_effector - traj.elbow, axis=1) - arm.forearm_cm)
    return float(upper.max(initial=0.0)), float(fore.max(initial=0.0))
