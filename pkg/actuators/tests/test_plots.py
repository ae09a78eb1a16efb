import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
from django.test import SimpleTestCase

from actuators.exceptions import DomainError
from actuators.experiment import ExperimentConfig, run_experiment
from actuators.models import ActuatorSpec, CellShape
from actuators.plots import emit_plots, plot_pressure, plot_trajectories, trajectory_figure


class PlotTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        variants = (ActuatorSpec(CellShape.SQUARE, 3, 8), ActuatorSpec(CellShape.RECTANGLE, 4, 12),
                    ActuatorSpec(CellShape.CIRCLE, 4, 10))
        cls.result = run_experiment(ExperimentConfig(variants=variants, trials=1, seed=3))
        cls.trajectories = {spec: cls.result.trajectories[(spec, 1)] for spec in cls.result.variants}

    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.dir = Path(tmp.name)

    def test_one_line_per_variant(self):
        paths = emit_plots(self.result.pressure, self.trajectories, self.dir)
        self.assertEqual([p.name for p in paths], ['pressure.svg', 'trajectories.svg'])
        for path in paths:
            ids = [e.get('id') for e in ET.parse(path).getroot().iter() if e.get('id')]
            with self.subTest(figure=path.name):
                for spec in self.result.variants:
                    self.assertEqual(ids.count(spec.slug), 1)

    def test_repeatable_output(self):
        first = plot_trajectories(self.trajectories, self.dir / 'a.svg')
        second = plot_trajectories(self.trajectories, self.dir / 'b.svg')
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_nothing_to_plot(self):
        with self.assertRaises(DomainError):
            plot_pressure({}, self.dir / 'p.svg')
        with self.assertRaises(DomainError):
            plot_trajectories({}, self.dir / 't.svg')

    def test_trajectory_axes_hold_every_sample(self):
        fig, ax = trajectory_figure(self.trajectories)
        self.addCleanup(plt.close, fig)
        fig.canvas.draw()
        points = np.concatenate([traj.end_effector for traj in self.trajectories.values()])
        (x0, x1), (y0, y1) = ax.get_xlim(), ax.get_ylim()
        self.assertLessEqual(x0, points[:, 0].min())
        self.assertGreaterEqual(x1, points[:, 0].max())
        self.assertLessEqual(y0, points[:, 1].min())
        self.assertGreaterEqual(y1, points[:, 1].max())
