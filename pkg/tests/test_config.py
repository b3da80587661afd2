#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import os
import shutil
import tempfile

from unittest import TestCase

from rarekit import ConfigException, config
from rarekit.config import RunConfig, parse_overrides, read_config_file


class TestConfig(TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.tmp_dir = tempfile.mkdtemp()

    @classmethod
    def tearDownClass(cls) -> None:
        shutil.rmtree(cls.tmp_dir)

    def tearDown(self) -> None:
        config.Config = None

    def test_load(self):
        loaded = config.load(project_dir=self.tmp_dir, seed=5, workers=2)
        self.assertIs(loaded, config.Config)
        self.assertEqual(os.path.join(self.tmp_dir, 'output'), loaded.out_dir)
        self.assertEqual(os.path.join(self.tmp_dir, 'output', 'manifest.yaml'), loaded.manifest)
        self.assertEqual(os.path.join(self.tmp_dir, 'logs', 'rarekit.log'), loaded.logs)
        self.assertEqual(5, loaded.seed)
        self.assertEqual(2, loaded.workers)

    def test_invalid(self):
        with self.assertRaises(ConfigException):
            config.load(project_dir=self.tmp_dir, seed=-1)
        with self.assertRaises(ConfigException):
            config.load(project_dir=self.tmp_dir, workers=0)

    def test_parse_overrides(self):
        self.assertEqual({}, parse_overrides(None))
        self.assertEqual(
            {'tau': 0.5, 'mode': 'universes', 'label_coding': 'x'},
            parse_overrides('tau=0.5,mode=universes,label-coding=x'),
        )
        self.assertEqual(
            {'Bs': '1,5,10', 'tune': True},
            parse_overrides(['Bs=1,5,10', 'tune=true']),
        )
        self.assertEqual({'not-spam': -1}, parse_overrides('not-spam=-1', normalise_keys=False))
        with self.assertRaises(ConfigException):
            parse_overrides('tau')

    def test_read_config_file(self):
        path = os.path.join(self.tmp_dir, 'flat.yaml')
        with open(path, 'w') as stream:
            stream.write('seed: 3\nout-dir: out\nBs: [1, 5]\n')
        self.assertEqual({'seed': 3, 'out_dir': 'out', 'Bs': [1, 5]}, read_config_file(path))

        nested = os.path.join(self.tmp_dir, 'nested.yaml')
        with open(nested, 'w') as stream:
            stream.write('select:\n  B: 10\n')
        with self.assertRaises(ConfigException):
            read_config_file(nested)
        with self.assertRaises(ConfigException):
            read_config_file(os.path.join(self.tmp_dir, 'missing.yaml'))


class TestRunConfig(TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.tmp_dir = tempfile.mkdtemp()

    @classmethod
    def tearDownClass(cls) -> None:
        shutil.rmtree(cls.tmp_dir)

    def test_round_trip(self):
        run_config = RunConfig(
            command=['experiments', 'fig5'],
            params={'seed': 2 ** 63 + 5, 'tau': 0.1, 'Bs': '1,5,10', 'tune': False,
                    'gamma': None},
        )
        path = os.path.join(self.tmp_dir, 'manifest.yaml')
        run_config.write(path)
        self.assertEqual(run_config, RunConfig.from_file(path))

    def test_to_dict(self):
        run_config = RunConfig(['select'], {'mode': 'universes', 'B': 10})
        self.assertEqual(
            {'command': 'select', 'B': 10, 'mode': 'universes'},
            run_config.to_dict(),
        )

    def test_missing_command(self):
        path = os.path.join(self.tmp_dir, 'empty.yaml')
        with open(path, 'w') as stream:
            stream.write('seed: 1\n')
        with self.assertRaises(ConfigException):
            RunConfig.from_file(path)
