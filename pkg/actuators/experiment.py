"""Repeated simulated trials over a set of variants."""
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .design_space import default_constraints, downselect, enumerate_design_space
from .exceptions import ConfigError, DomainError, MissingEntryError
from .geometry import estimated_elongation, measured_elongation
from .ingest import (
    default_displacement_table,
    default_measured_elongation,
    load_pneumatic_config,
    read_settings_ini,
)
from .kinematics import ArmModel, add_noise, simulate_trial
from .metrics import trial_metrics
from .models import report_key
from .pneumatics import classify_completion, cycle_profile
from .serializers import ExperimentConfigSerializer, first_error
from .stats import Pooling

logger = logging.getLogger(__name__)

# Share of actuator elongation reaching the joint once strapped to the arm.
# At 1.0 sixteen of the eighteen viable variants hit the 105° joint stop, so
# 3 cm variants out-flex 4 cm ones and straightness no longer rises with cell
# count; at 0.3 every variant stays below the stop.
STRAPPED_TRANSMISSION = 0.3
ARM_KEYS = ('upper_arm_cm', 'forearm_cm', 'forearm_mass_kg', 'passive_rom_deg', 'attach_d_cm')


@dataclass(frozen=True)
class ExperimentConfig:
    variants: tuple | None = None
    arm: ArmModel = field(default_factory=lambda: ArmModel(transmission=STRAPPED_TRANSMISSION))
    pneumatics: str | None = None
    trials: int = 10
    phase_s: float = 5.0
    seed: int = 0
    sigma_pos_cm: float = 1e-4
    sigma_acc: float = 0.02
    elongation_jitter: float = 0.03
    elongation_source: str = 'measured'
    pooling: str = Pooling.TRIALS
    out_dir: str | None = None
    # recorded with the results, not used in any computation
    marker_diameter_cm: float = 0.10
    strap_length_cm: float = 16.0

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trial count must be at least 1, got {self.trials}")
        if self.pneumatics is not None and not Path(self.pneumatics).is_file():
            raise ConfigError(f"{self.pneumatics}: no such pneumatic config")


def experiment_config(data, base_dir=None):
    """Validate raw option values into an ExperimentConfig.

    Relative paths are resolved against ``base_dir``.
    """
    serializer = ExperimentConfigSerializer(data=data)
    if not serializer.is_valid():
        key, message = first_error(serializer.errors)
        raise ConfigError(f"{key}: {message}")
    values = dict(serializer.validated_data)
    arm_overrides = {key: values.pop(key) for key in ARM_KEYS if key in values}
    try:
        arm = ArmModel(transmission=values.pop('transmission'), **arm_overrides)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    for key in ('pneumatics', 'out_dir'):
        if values.get(key):
            path = Path(values[key])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            values[key] = str(path)
        else:
            values[key] = None
    values['variants'] = values.get('variants') or None
    return ExperimentConfig(arm=arm, **values)


def load_experiment_config(path):
    keys = tuple(ExperimentConfigSerializer().fields)
    try:
        return experiment_config(read_settings_ini(path, keys), base_dir=Path(path).parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    variants: tuple
    metrics: list = field(default_factory=list)
    trajectories: dict = field(default_factory=dict)
    pressure: dict = field(default_factory=dict)
    completion: dict = field(default_factory=dict)
    elongation: dict = field(default_factory=dict)


def variant_seed(seed, spec):
    """Seed sequence of one variant, independent of which other variants run."""
    return np.random.SeedSequence([seed, spec.shape.order, int(round(spec.cell_length_p * 1000)), spec.n_cells])


def base_elongation(spec, table, measured, source):
    if source == 'measured':
        try:
            return measured_elongation(spec, measured)
        except MissingEntryError:
            logger.info("%s has no measured elongation, using the estimate", spec.label)
    return estimated_elongation(spec, table)


def run_experiment(cfg, table=None, measured=None, pneumatic=None):
    table = table or default_displacement_table()
    measured = measured or default_measured_elongation()
    pneumatic = pneumatic or load_pneumatic_config(cfg.pneumatics)
    variants = cfg.variants or downselect(enumerate_design_space(), default_constraints()).viable
    variants = tuple(sorted(set(variants), key=report_key))
    result = ExperimentResult(config=cfg, variants=variants)

    for spec in variants:
        elongation = base_elongation(spec, table, measured, cfg.elongation_source)
        result.elongation[spec] = elongation
        result.completion[spec] = classify_completion(spec, table, pneumatic)
        result.pressure[spec] = cycle_profile(spec, table, pneumatic, phase_s=cfg.phase_s)
        for trial, trial_seq in enumerate(variant_seed(cfg.seed, spec).spawn(cfg.trials), start=1):
            jitter_seq, noise_seq = trial_seq.spawn(2)
            scale = 1.0 + np.random.default_rng(jitter_seq).normal(0.0, cfg.elongation_jitter)
            traj = simulate_trial(
                spec, table, pneumatic, cfg.arm, phase_s=cfg.phase_s, elongation=max(elongation * scale, 0.0)
            )
            traj = add_noise(traj, noise_seq, cfg.sigma_pos_cm, cfg.sigma_acc)
            result.trajectories[(spec, trial)] = traj
            result.metrics.append(trial_metrics(traj, spec, trial))
        logger.debug("%s: %d trials, %s", spec.label, cfg.trials, result.completion[spec].value)
    logger.info("simulated %d trials over %d variants", len(result.metrics), len(variants))
    return result


def with_overrides(cfg, **changes):
    changes = {key: value for key, value in changes.items() if value is not None}
    return replace(cfg, **changes) if changes else cfg
