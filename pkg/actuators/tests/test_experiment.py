from collections import defaultdict

import numpy as np
from django.test import SimpleTestCase

from actuators.design_space import default_constraints, downselect, enumerate_design_space
from actuators.exceptions import ConfigError, DomainError
from actuators.experiment import (
    STRAPPED_TRANSMISSION,
    ExperimentConfig,
    base_elongation,
    experiment_config,
    run_experiment,
    variant_seed,
    with_overrides,
)
from actuators.geometry import measured_elongation
from actuators.ingest import default_displacement_table, default_measured_elongation
from actuators.kinematics import ArmModel, active_flexion_angle
from actuators.models import ActuatorSpec, CellShape, Completion, Metric
from actuators.pneumatics import OBSERVED_INCOMPLETE


def group_means(records, metric, key):
    groups = defaultdict(list)
    for record in records:
        groups[key(record.variant)].append(record.value(metric))
    return {level: float(np.mean(values)) for level, values in groups.items()}


class ExperimentOrderingTests(SimpleTestCase):
    """Factor trends of the full sweep over the viable variants."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.result = run_experiment(ExperimentConfig(seed=7))

    def test_sweep_shape(self):
        self.assertEqual(len(self.result.variants), 18)
        self.assertEqual(len(self.result.metrics), 180)
        self.assertEqual(self.result.variants[0].label, 'Square-3-8')
        self.assertEqual(self.result.variants[-1].label, 'Circle-4-12')
        flagged = {spec for spec, status in self.result.completion.items() if status == Completion.INCOMPLETE}
        self.assertEqual(flagged, OBSERVED_INCOMPLETE)

    def test_path_length_by_shape(self):
        path = group_means(self.result.metrics, Metric.PATH, lambda spec: spec.shape)
        self.assertGreater(path[CellShape.CIRCLE], path[CellShape.SQUARE])
        self.assertGreater(path[CellShape.CIRCLE], path[CellShape.RECTANGLE])

    def test_path_length_by_cell_count(self):
        path = group_means(self.result.metrics, Metric.PATH, lambda spec: spec.n_cells)
        self.assertLess(path[8], path[10])
        self.assertLess(path[8], path[12])

    def test_straightness_by_cell_count(self):
        si = group_means(self.result.metrics, Metric.SI, lambda spec: spec.n_cells)
        self.assertLess(si[8], si[10])
        self.assertLess(si[10], si[12])

    def test_flexion_angle(self):
        by_size = group_means(self.result.metrics, Metric.ANGLE, lambda spec: spec.cell_length_p)
        self.assertGreater(by_size[4.0], by_size[3.0])
        by_shape = group_means(self.result.metrics, Metric.ANGLE, lambda spec: spec.shape)
        self.assertGreater(by_shape[CellShape.CIRCLE], by_shape[CellShape.RECTANGLE])

    def test_no_variant_reaches_the_joint_stop(self):
        self.assertTrue(all(r.flexion_range_deg < 105.0 for r in self.result.metrics))


class StrapTransmissionTests(SimpleTestCase):
    def setUp(self):
        measured = default_measured_elongation()
        viable = downselect(enumerate_design_space(), default_constraints()).viable
        self.elongation = {spec: measured_elongation(spec, measured) for spec in viable}

    def stopped(self, arm):
        return {spec for spec, e in self.elongation.items() if active_flexion_angle(e, arm) >= arm.passive_rom_deg}

    def test_pure_arc_saturates_the_joint(self):
        self.assertEqual(self.stopped(ArmModel()), set(self.elongation) - {
            ActuatorSpec(CellShape.RECTANGLE, 3, 8),
            ActuatorSpec(CellShape.RECTANGLE, 3, 10),
        })

    def test_strapped_arm_stays_below_the_stop(self):
        arm = ExperimentConfig().arm
        self.assertEqual(arm.transmission, STRAPPED_TRANSMISSION)
        self.assertEqual(self.stopped(arm), set())


class ExperimentReproducibilityTests(SimpleTestCase):
    def setUp(self):
        self.variants = (ActuatorSpec(CellShape.SQUARE, 3, 8), ActuatorSpec(CellShape.CIRCLE, 4, 12))
        self.cfg = ExperimentConfig(variants=self.variants, trials=3, seed=11)

    def test_same_seed_same_metrics(self):
        self.assertEqual(run_experiment(self.cfg).metrics, run_experiment(self.cfg).metrics)

    def test_other_seed_other_metrics(self):
        self.assertNotEqual(run_experiment(self.cfg).metrics,
                            run_experiment(with_overrides(self.cfg, seed=12)).metrics)

    def test_variant_streams_are_independent(self):
        alone = run_experiment(with_overrides(self.cfg, variants=self.variants[:1])).metrics
        together = [r for r in run_experiment(self.cfg).metrics if r.variant == self.variants[0]]
        self.assertEqual(alone, together)

    def test_variant_seed(self):
        a = variant_seed(3, self.variants[0]).generate_state(4)
        b = variant_seed(3, self.variants[1]).generate_state(4)
        self.assertFalse(np.array_equal(a, b))

    def test_trial_ids(self):
        result = run_experiment(self.cfg)
        self.assertEqual([r.trial_id for r in result.metrics], [1, 2, 3, 1, 2, 3])
        self.assertEqual(set(result.trajectories), {(s, t) for s in self.variants for t in (1, 2, 3)})


class ExperimentConfigTests(SimpleTestCase):
    def test_defaults(self):
        cfg = experiment_config({})
        self.assertEqual((cfg.trials, cfg.seed, cfg.elongation_source), (10, 0, 'measured'))
        self.assertEqual(cfg.arm.transmission, 0.3)
        self.assertIsNone(cfg.variants)

    def test_arm_override(self):
        self.assertEqual(experiment_config({'forearm_cm': '12.5'}).arm.forearm_cm, 12.5)

    def test_invalid(self):
        for data in ({'trials': 'many'}, {'transmission': '0'}, {'elongation_source': 'guessed'},
                     {'variants': 'hexagon,3,8'}):
            with self.subTest(**data), self.assertRaises(ConfigError):
                experiment_config(data)

    def test_trial_count(self):
        with self.assertRaises(DomainError):
            ExperimentConfig(trials=0)

    def test_estimate_used_without_measurement(self):
        table, measured = default_displacement_table(), default_measured_elongation()
        spec = ActuatorSpec(CellShape.SQUARE, 3, 6)
        with self.assertLogs('actuators.experiment', 'INFO'):
            self.assertAlmostEqual(base_elongation(spec, table, measured, 'measured'), 6 * 1.43)
        self.assertAlmostEqual(base_elongation(ActuatorSpec(CellShape.SQUARE, 3, 8), table, measured, 'estimated'),
                               11.44)
