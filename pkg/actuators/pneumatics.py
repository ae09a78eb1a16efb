"""First-order pressure dynamics of a bellow actuator.

One time constant per variant: tau = shape resistance * cavity volume /
supply flow. The per-shape factors absorb channel and seam effects that a
volume-only model cannot reproduce.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import CalibrationError, DomainError
from .geometry import total_inflated_volume
from .models import ActuatorSpec, CellShape, Completion, Phase

logger = logging.getLogger(__name__)

OBSERVED_INCOMPLETE = frozenset({
    ActuatorSpec(CellShape.SQUARE, 4, 10),
    ActuatorSpec(CellShape.SQUARE, 4, 12),
    ActuatorSpec(CellShape.RECTANGLE, 4, 12),
    ActuatorSpec(CellShape.CIRCLE, 4, 12),
})


def _default_resistance():
    return {CellShape.SQUARE: 1.0, CellShape.RECTANGLE: 2.25, CellShape.CIRCLE: 1.0}


@dataclass(frozen=True)
class PneumaticConfig:
    steady_pressure_kpa: float = 35.0
    supply_flow: float = 110.0
    shape_resistance: dict = field(default_factory=_default_resistance)
    completion_fraction: float = 0.95
    window_s: float = 5.0

    def __post_init__(self):
        resistance = {CellShape(shape): float(value) for shape, value in self.shape_resistance.items()}
        missing = [shape.label for shape in CellShape if shape not in resistance]
        if missing:
            raise DomainError(f"no flow resistance factor for {', '.join(missing)}")
        if any(value <= 0 for value in resistance.values()):
            raise DomainError("flow resistance factors must be positive")
        if not 0.0 < self.completion_fraction < 1.0:
            raise DomainError(f"completion fraction must lie in (0, 1), got {self.completion_fraction}")
        if self.steady_pressure_kpa <= 0:
            raise DomainError("steady pressure must be positive")
        if self.window_s <= 0:
            raise DomainError("actuation window must be positive")
        object.__setattr__(self, 'shape_resistance', resistance)

    def resistance(self, shape):
        return self.shape_resistance[CellShape(shape)]

    @property
    def completion_log(self):
        return math.log(1.0 / (1.0 - self.completion_fraction))


@dataclass(frozen=True, eq=False)
class PressureSeries:
    t: np.ndarray
    p_kpa: np.ndarray
    label: str = ''


def time_constant(spec, table, cfg):
    if cfg.supply_flow <= 0:
        raise DomainError(f"supply flow must be positive, got {cfg.supply_flow}")
    return cfg.resistance(spec.shape) * total_inflated_volume(spec, table) / cfg.supply_flow


def fill_time(spec, table, cfg):
    """Time to reach the completion fraction of the steady volume."""
    return time_constant(spec, table, cfg) * cfg.completion_log


def _sample_times(duration_s, dt_s):
    if duration_s <= 0 or dt_s <= 0:
        raise DomainError(f"duration and step must be positive, got {duration_s} and {dt_s}")
    steps = int(round(duration_s / dt_s))
    return np.arange(steps + 1) * dt_s


def pressure_profile(spec, table, cfg, phase, duration_s, dt_s, p_start=None):
    """Pressure in kPa over one phase, starting from ``p_start``.

    Inflation starts empty and deflation starts at steady pressure unless
    told otherwise.
    """
    phase = Phase(phase)
    t = _sample_times(duration_s, dt_s)
    tau = time_constant(spec, table, cfg)
    decay = np.exp(-t / tau) if tau > 0 else np.where(t > 0, 0.0, 1.0)
    p_ss = cfg.steady_pressure_kpa
    if phase == Phase.INFLATE:
        p0 = 0.0 if p_start is None else float(p_start)
        p = p_ss - (p_ss - p0) * decay
    else:
        p0 = p_ss if p_start is None else float(p_start)
        p = p0 * decay
    return PressureSeries(t=t, p_kpa=np.clip(p, 0.0, p_ss), label=spec.label)


def cycle_profile(spec, table, cfg, phase_s=None, dt_s=1.0 / 60.0):
    """Inflation followed by deflation from wherever inflation got to."""
    phase_s = cfg.window_s if phase_s is None else phase_s
    inflate = pressure_profile(spec, table, cfg, Phase.INFLATE, phase_s, dt_s)
    deflate = pressure_profile(spec, table, cfg, Phase.DEFLATE, phase_s, dt_s, p_start=inflate.p_kpa[-1])
    t = np.concatenate([inflate.t, inflate.t[-1] + deflate.t[1:]])
    p = np.concatenate([inflate.p_kpa, deflate.p_kpa[1:]])
    return PressureSeries(t=t, p_kpa=p, label=spec.label)


def _incomplete(tau, cfg):
    return tau * cfg.completion_log > cfg.window_s


def classify_completion(spec, table, cfg):
    if _incomplete(time_constant(spec, table, cfg), cfg):
        return Completion.INCOMPLETE
    return Completion.COMPLETE


def incomplete_variants(specs, table, cfg):
    return frozenset(spec for spec in specs if classify_completion(spec, table, cfg) == Completion.INCOMPLETE)


def _steps(start, stop, step):
    return tuple(float(v) for v in np.round(np.arange(start, stop + step / 2.0, step), 6))


@dataclass(frozen=True)
class SearchGrid:
    """Candidate values, searched in (circle, rectangle, flow) order.

    The square factor is the reference and stays at 1.0.
    """
    circle_factors: tuple = _steps(0.25, 4.0, 0.25)
    rectangle_factors: tuple = _steps(0.25, 4.0, 0.25)
    supply_flows: tuple = _steps(10.0, 300.0, 5.0)

    @property
    def size(self):
        return len(self.circle_factors) * len(self.rectangle_factors) * len(self.supply_flows)


def _violations(volumes, target_flagged, resistance, flow, cfg):
    found = []
    for spec, volume in volumes:
        flagged = _incomplete(resistance[spec.shape] * volume / flow, cfg)
        wanted = spec in target_flagged
        if flagged and not wanted:
            found.append(f"{spec.label} should complete")
        elif wanted and not flagged:
            found.append(f"{spec.label} should be flagged incomplete")
    return found


def calibrate_resistances(target_flagged, target_unflagged, table, grid=None, base=None):
    """First grid point whose classification flags exactly ``target_flagged``."""
    target_flagged = frozenset(target_flagged)
    target_unflagged = frozenset(target_unflagged)
    overlap = target_flagged & target_unflagged
    if overlap:
        raise DomainError(f"target sets overlap: {', '.join(sorted(s.label for s in overlap))}")
    grid = grid or SearchGrid()
    base = base or PneumaticConfig()
    specs = sorted(target_flagged | target_unflagged, key=lambda s: (s.shape.order, s.cell_length_p, s.n_cells))
    volumes = [(spec, total_inflated_volume(spec, table)) for spec in specs]

    best = None
    for circle, rectangle, flow in itertools.product(grid.circle_factors, grid.rectangle_factors, grid.supply_flows):
        if flow <= 0:
            continue
        resistance = {CellShape.SQUARE: 1.0, CellShape.RECTANGLE: rectangle, CellShape.CIRCLE: circle}
        found = _violations(volumes, target_flagged, resistance, flow, base)
        if not found:
            logger.info("calibrated: circle=%s rectangle=%s flow=%s", circle, rectangle, flow)
            return replace(base, shape_resistance=resistance, supply_flow=flow)
        if best is None or len(found) < len(best[1]):
            best = ((circle, rectangle, flow), found)

    if best is None:
        raise CalibrationError("search grid is empty")
    (circle, rectangle, flow), found = best
    raise CalibrationError(
        f"no feasible point among {grid.size} (closest: circle={circle}, rectangle={rectangle}, flow={flow})",
        found,
        closest=(circle, rectangle, flow),
    )


@dataclass(frozen=True)
class InfeasibilityEvidence:
    points_tried: int
    min_violations: int
    closest: tuple
    violations: tuple

    @property
    def feasible(self):
        return self.min_violations == 0


def volume_only_evidence(target_flagged, target_unflagged, table, flows=None, base=None):
    """Run the search with every shape factor pinned to 1 (pure volume model)."""
    grid = SearchGrid(
        circle_factors=(1.0,),
        rectangle_factors=(1.0,),
        supply_flows=flows or SearchGrid().supply_flows,
    )
    try:
        cfg = calibrate_resistances(target_flagged, target_unflagged, table, grid=grid, base=base)
    except CalibrationError as exc:
        return InfeasibilityEvidence(grid.size, len(exc.violations), exc.closest, exc.violations)
    return InfeasibilityEvidence(grid.size, 0, (1.0, 1.0, cfg.supply_flow), ())


def observed_targets(viable):
    """Split ``viable`` into the four variants the experiments flagged and the rest."""
    viable = frozenset(viable)
    return viable & OBSERVED_INCOMPLETE, viable - OBSERVED_INCOMPLETE
