#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import os
import shutil
import tempfile
import textwrap

import pandas as pd

from unittest import TestCase

from rarekit.constants import EXPERIMENT_PATH_ENV
from rarekit.experiments import load_experiments
from rarekit.experiments.base_experiment import BaseExperiment
from rarekit.experiments.sensitivity_experiment import B_spread, grid_ranges


PLUGIN = textwrap.dedent('''
    import pandas as pd

    from rarekit.experiments.base_experiment import BaseExperiment


    class EchoExperiment(BaseExperiment):

        name = 'echo'
        help = 'Writes a single row'

        def run(self):
            self.kit.write(pd.DataFrame({'value': [1]}), 'echo.csv')
''')


class TestLoadExperiments(TestCase):

    def setUp(self) -> None:
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self) -> None:
        os.environ.pop(EXPERIMENT_PATH_ENV, None)
        shutil.rmtree(self.tmp_dir)

    def test_included(self):
        experiments = load_experiments()
        self.assertEqual(['fig2', 'fig3', 'fig4', 'fig5'], sorted(experiments))
        for name, experiment in experiments.items():
            self.assertTrue(issubclass(experiment, BaseExperiment))
            self.assertEqual(name, experiment.name)
            self.assertTrue(experiment.help)

    def test_plugin_dir(self):
        with open(os.path.join(self.tmp_dir, 'echo_experiment.py'), 'w') as stream:
            stream.write(PLUGIN)
        with open(os.path.join(self.tmp_dir, 'helpers.py'), 'w') as stream:
            stream.write('raise RuntimeError("not an experiment")\n')
        os.environ[EXPERIMENT_PATH_ENV] = self.tmp_dir
        experiments = load_experiments()
        self.assertIn('echo', experiments)
        self.assertIn('fig5', experiments)


class TestGridSummaries(TestCase):

    def test_grid_ranges(self):
        grid = pd.DataFrame({
            'gamma': [1.0, 1.0, 10.0, 10.0],
            'h': [0.1, 1.0, 0.1, 1.0],
            'errors': [5, 9, 3, 4],
        })
        self.assertEqual((1, 2), grid_ranges(grid, 'gamma', 'h'))

    def test_B_spread(self):
        forest = pd.DataFrame({
            'm': [1, 1, 2, 2],
            'B': [10, 20, 10, 20],
            'errors': [10, 6, 4, 4],
        })
        self.assertAlmostEqual(0.5, B_spread(forest))
        zero = pd.DataFrame({'m': [1, 1], 'B': [10, 20], 'errors': [0, 0]})
        self.assertEqual(0.0, B_spread(zero))
