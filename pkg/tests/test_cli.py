#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import filecmp
import os
import shutil
import tempfile

import pandas as pd
import yaml

from click.testing import CliRunner
from unittest import TestCase

from rarekit import config
from rarekit.cli import cli, run
from rarekit.config import RunConfig
from rarekit.data import write_csv
from rarekit.toys import gaussian_mixture, pga_toy, separated_clusters


class CliTestCase(TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.tmp_dir = tempfile.mkdtemp()
        cls.regression = write_csv(pga_toy(seed=1, n=30, d=4, truth=(1, 3)),
                                   os.path.join(cls.tmp_dir, 'regression.csv'))
        cls.clusters = write_csv(separated_clusters(seed=2, n=40, gap=6.0),
                                 os.path.join(cls.tmp_dir, 'clusters.csv'))
        cls.rare = write_csv(gaussian_mixture(seed=3, n=400),
                             os.path.join(cls.tmp_dir, 'rare.csv'))

    @classmethod
    def tearDownClass(cls) -> None:
        shutil.rmtree(cls.tmp_dir)

    def tearDown(self) -> None:
        config.Config = None

    def out_dir(self, name):
        return os.path.join(self.tmp_dir, name)

    def invoke(self, name, *args):
        out_dir = self.out_dir(name)
        result = CliRunner().invoke(
            cli, ['--project-dir', self.tmp_dir, '--out-dir', out_dir, *args]
        )
        self.assertEqual(0, result.exit_code, result.output + repr(result.exception))
        return out_dir

    def read(self, out_dir, name):
        return pd.read_csv(os.path.join(out_dir, name))


class TestCommands(CliTestCase):

    def test_kpca(self):
        out_dir = self.invoke('kpca', 'kpca', '--data', self.regression, '--q', '2',
                              '--new-data', self.regression)
        scores = self.read(out_dir, 'kpca_scores.csv')
        self.assertEqual(['row_id', 'pc1', 'pc2', 'y'], list(scores.columns))
        pd.testing.assert_frame_equal(scores, self.read(out_dir, 'kpca_projection.csv'),
                                      check_exact=False, atol=1e-8)
        self.assertEqual(2, len(self.read(out_dir, 'kpca_eigenvalues.csv')))

    def test_svm_fit_linear(self):
        out_dir = self.invoke('svm', 'svm', 'fit', '--data', self.clusters,
                              '--kernel', 'linear', '--cost', '10')
        summary = self.read(out_dir, 'svm_summary.csv')
        self.assertEqual('train', summary['evaluated_on'][0])
        self.assertIn('canonical', summary.columns)
        self.assertEqual(40, len(self.read(out_dir, 'svm_predictions.csv')))

    def test_svm_grid(self):
        out_dir = self.invoke('svm_grid', 'svm', 'grid', '--data', self.clusters,
                              '--train-fraction', '0.5', '--gammas', '1,10', '--hs', '0.1',
                              '--epochs', '2')
        self.assertEqual(2, len(self.read(out_dir, 'svm_grid.csv')))

    def test_lago_rank(self):
        out_dir = self.invoke('lago', 'lago', 'rank', '--data', self.rare,
                              '--train-fraction', '0.6', '--tune', '--alphas', '0.5,1,2',
                              '--folds', '3', '--cutoffs', '5,10')
        ranking = self.read(out_dir, 'lago_ranking.csv')
        self.assertEqual(['row_id', 'score', 'rank', 'y'], list(ranking.columns))
        self.assertEqual(3, len(self.read(out_dir, 'lago_tuning.csv')))
        summary = self.read(out_dir, 'lago_summary.csv')
        self.assertIn('hits_at_10', summary.columns)

    def test_kpca_export_gram(self):
        out_dir = self.invoke('kpca_gram', 'kpca', '--data', self.regression, '--q', '2',
                              '--export-gram')
        frame = self.read(out_dir, 'kpca_gram.csv')
        self.assertEqual((30, 30), frame.shape)
        self.assertEqual(['k1', 'k2'], list(frame.columns[:2]))
        self.assertAlmostEqual(frame['k2'][0], frame['k1'][1])

    def test_boost(self):
        out_dir = self.invoke('boost', 'boost', 'fit', '--data', self.clusters, '--B', '5')
        self.assertEqual('ok', self.read(out_dir, 'boost_summary.csv')['status'][0])
        self.assertTrue(os.path.exists(os.path.join(out_dir, 'boost_history.csv')))
        self.assertTrue(os.path.exists(os.path.join(out_dir, 'boost_model.npz')))

    def test_boost_grid(self):
        out_dir = self.invoke('boost_grid', 'boost', 'grid', '--data', self.clusters,
                              '--train-fraction', '0.5', '--Bs', '1,3')
        grid = self.read(out_dir, 'boost_grid.csv')
        self.assertEqual(['B', 'rounds', 'errors'], list(grid.columns))
        self.assertEqual([1, 3], grid['B'].tolist())
        self.assertEqual(2, self.read(out_dir, 'boost_grid_summary.csv')['cells'][0])

    def test_forest(self):
        out_dir = self.invoke('forest', 'forest', 'fit', '--data', self.clusters,
                              '--B', '5', '--m', '1')
        summary = self.read(out_dir, 'forest_summary.csv')
        self.assertEqual(5, summary['B'][0])
        self.assertEqual(1, summary['m'][0])
        out_dir = self.invoke('forest_grid', 'forest', 'grid', '--data', self.clusters,
                              '--train-fraction', '0.5', '--ms', '1,2', '--Bs', '2,3')
        self.assertEqual(4, len(self.read(out_dir, 'forest_grid.csv')))

    def test_select_exhaustive(self):
        out_dir = self.invoke('exhaustive', 'select', '--data', self.regression,
                              '--mode', 'exhaustive', '--truth', '1,3')
        table = self.read(out_dir, 'select_table.csv')
        self.assertEqual(16, len(table))
        self.assertIn('group', table.columns)

    def test_select_stepwise(self):
        out_dir = self.invoke('stepwise', 'select', '--data', self.regression,
                              '--mode', 'stepwise', '--criterion', 'bic')
        self.assertEqual('bic', self.read(out_dir, 'select_summary.csv')['criterion'][0])

    def test_manifest(self):
        out_dir = self.invoke('manifest', '--seed', '7', 'select', '--data', self.regression,
                              '--B', '2', '--generations', '1', '--population', '6')
        manifest = RunConfig.from_file(os.path.join(out_dir, 'manifest.yaml'))
        self.assertEqual(['select'], manifest.command)
        self.assertEqual(7, manifest.params['seed'])
        self.assertEqual(2, manifest.params['B'])
        self.assertEqual('universes', manifest.params['mode'])
        self.assertEqual(out_dir, manifest.params['out_dir'])


class TestSavedModels(CliTestCase):

    @classmethod
    def setUpClass(cls) -> None:
        super().setUpClass()
        frame = pd.read_csv(cls.clusters).drop(columns=['y'])
        cls.unlabelled = os.path.join(cls.tmp_dir, 'unlabelled.csv')
        frame.to_csv(cls.unlabelled, index=False)

    def fit_and_predict(self, kind, *fit_args):
        fitted = self.invoke(f'{kind}_fitted', kind, 'fit', '--data', self.clusters, *fit_args)
        model = os.path.join(fitted, f'{kind}_model.npz')
        self.assertTrue(os.path.exists(model))
        out_dir = self.invoke(f'{kind}_predicted', kind, 'predict', '--model', model,
                              '--data', self.clusters)
        predictions = self.read(out_dir, f'{kind}_predictions.csv')
        self.assertEqual(['row_id', 'decision', 'prediction', 'y'], list(predictions.columns))
        pd.testing.assert_series_equal(
            self.read(fitted, f'{kind}_predictions.csv')['prediction'],
            predictions['prediction'],
        )
        summary = self.read(out_dir, f'{kind}_predict_summary.csv')
        self.assertEqual(40, summary['n_eval'][0])
        self.assertEqual(self.read(fitted, f'{kind}_summary.csv')['errors'][0],
                         summary['errors'][0])
        return model

    def test_svm(self):
        model = self.fit_and_predict('svm', '--kernel', 'linear', '--epochs', '3')
        out_dir = self.invoke('svm_unlabelled', 'svm', 'predict', '--model', model,
                              '--data', self.unlabelled)
        predictions = self.read(out_dir, 'svm_predictions.csv')
        self.assertEqual(['row_id', 'decision', 'prediction'], list(predictions.columns))
        self.assertNotIn('errors', self.read(out_dir, 'svm_predict_summary.csv').columns)

    def test_boost(self):
        self.fit_and_predict('boost', '--B', '4')

    def test_forest(self):
        self.fit_and_predict('forest', '--B', '3', '--m', '1')

    def test_bagging(self):
        self.fit_and_predict('forest', '--B', '3', '--bagging')

    def test_wrong_model_kind(self):
        fitted = self.invoke('boost_for_svm', 'boost', 'fit', '--data', self.clusters,
                             '--B', '2')
        self.assertEqual(3, run(['--project-dir', self.tmp_dir, '--out-dir',
                                 self.out_dir('wrong_kind'), 'svm', 'predict', '--model',
                                 os.path.join(fitted, 'boost_model.npz'), '--data',
                                 self.clusters]))

    def test_lago_fit_and_rank(self):
        fitted = self.invoke('lago_fitted', 'lago', 'fit', '--data', self.rare, '--K', '5')
        centers = self.read(fitted, 'lago_centers.csv')
        self.assertEqual(['center', 'x1', 'x2', 'radius'], list(centers.columns))
        self.assertEqual(self.read(fitted, 'lago_fit_summary.csv')['centers'][0], len(centers))

        model = os.path.join(fitted, 'lago_model.npz')
        out_dir = self.invoke('lago_ranked', 'lago', 'rank', '--data', self.rare,
                              '--model', model)
        self.assertEqual(400, len(self.read(out_dir, 'lago_ranking.csv')))
        summary = self.read(out_dir, 'lago_summary.csv')
        self.assertEqual('data', summary['evaluated_on'][0])
        self.assertIn('average_precision', summary.columns)
        self.assertEqual(2, run(['--project-dir', self.tmp_dir, '--out-dir',
                                 self.out_dir('lago_model_tune'), 'lago', 'rank', '--data',
                                 self.rare, '--model', model, '--tune']))

    def test_elliptical_centers(self):
        fitted = self.invoke('elago_fitted', 'lago', 'fit', '--data', self.rare, '--K', '5',
                             '--variant', 'elago')
        self.assertEqual(['center', 'x1', 'x2', 'radius_x1', 'radius_x2'],
                         list(self.read(fitted, 'lago_centers.csv').columns))


class TestCommandSeed(CliTestCase):

    SELECT = ('select', '--mode', 'universes', '--B', '3', '--generations', '2',
              '--population', '8')

    def test_command_seed_matches_global_seed(self):
        local = self.invoke('seed_local', *self.SELECT, '--data', self.regression,
                            '--seed', '1')
        global_ = self.invoke('seed_global', '--seed', '1', *self.SELECT,
                              '--data', self.regression)
        manifest = RunConfig.from_file(os.path.join(local, 'manifest.yaml'))
        self.assertEqual(1, manifest.params['seed'])
        for name in ('select_frequencies.csv', 'select_universes.csv', 'select_summary.csv'):
            self.assertTrue(
                filecmp.cmp(os.path.join(local, name), os.path.join(global_, name),
                            shallow=False),
                name,
            )

        replayed = self.out_dir('seed_replayed')
        result = CliRunner().invoke(
            cli, ['--project-dir', self.tmp_dir, '--out-dir', replayed, 'replay',
                  os.path.join(local, 'manifest.yaml')]
        )
        self.assertEqual(0, result.exit_code, result.output + repr(result.exception))
        self.assertTrue(filecmp.cmp(os.path.join(local, 'select_frequencies.csv'),
                                    os.path.join(replayed, 'select_frequencies.csv'),
                                    shallow=False))

    def test_command_seed_beats_global_seed(self):
        out_dir = self.invoke('seed_both', '--seed', '5', 'boost', 'fit', '--data',
                              self.clusters, '--B', '2', '--seed', '8')
        manifest = RunConfig.from_file(os.path.join(out_dir, 'manifest.yaml'))
        self.assertEqual(8, manifest.params['seed'])


class TestConfigSources(CliTestCase):

    def test_config_file_and_overrides(self):
        path = os.path.join(self.tmp_dir, 'rarekit.yaml')
        with open(path, 'w') as stream:
            yaml.safe_dump({'mode': 'exhaustive', 'seed': 4, 'unused_key': 1}, stream)
        out_dir = self.invoke('config', '--config', path, '--set', 'criterion=bic',
                              'select', '--data', self.regression)
        self.assertTrue(os.path.exists(os.path.join(out_dir, 'select_table.csv')))
        manifest = RunConfig.from_file(os.path.join(out_dir, 'manifest.yaml'))
        self.assertEqual(4, manifest.params['seed'])
        self.assertEqual('bic', manifest.params['criterion'])

    def test_flags_beat_config(self):
        path = os.path.join(self.tmp_dir, 'flags.yaml')
        with open(path, 'w') as stream:
            yaml.safe_dump({'mode': 'exhaustive'}, stream)
        out_dir = self.invoke('flags', '--config', path, 'select', '--data', self.regression,
                              '--mode', 'stepwise')
        self.assertFalse(os.path.exists(os.path.join(out_dir, 'select_table.csv')))


class TestExperiments(CliTestCase):

    def test_fig2(self):
        out_dir = self.invoke('fig2', 'experiments', 'fig2', '--n', '40')
        self.assertEqual(40, len(self.read(out_dir, 'fig2_scores.csv')))
        self.assertIn('spearman_pc1_radius', self.read(out_dir, 'fig2_summary.csv').columns)

    def test_fig3(self):
        out_dir = self.invoke('fig3', 'experiments', 'fig3', '--data', self.clusters,
                              '--train-fraction', '0.5', '--gammas', '1', '--hs', '0.1,1',
                              '--epochs', '1', '--ms', '1,2', '--Bs', '2,3')
        self.assertEqual(2, len(self.read(out_dir, 'fig3_svm.csv')))
        self.assertEqual(4, len(self.read(out_dir, 'fig3_forest.csv')))

    def test_fig4(self):
        out_dir = self.invoke('fig4', 'experiments', 'fig4', '--n', '30', '--d', '4',
                              '--truth', '1,2')
        table = self.read(out_dir, 'fig4_table.csv')
        self.assertEqual(16, len(table))
        self.assertEqual(4, int((table['group'] == 'I').sum()))

    def test_fig5(self):
        out_dir = self.invoke('fig5', 'experiments', 'fig5', '--n', '30', '--d', '4',
                              '--truth', '1,2', '--Bs', '1,2', '--replicates', '2',
                              '--generations', '1', '--population', '6')
        self.assertEqual(16, len(self.read(out_dir, 'fig5_frequencies.csv')))
        summary = self.read(out_dir, 'fig5_summary.csv')
        self.assertEqual([1, 2], summary['B'].tolist())


    def test_toy(self):
        out_dir = self.invoke('toy', 'experiments', 'toy')
        frame = self.read(out_dir, 'toy.csv')
        self.assertEqual(50, len(frame))
        self.assertEqual([f'x{j}' for j in range(1, 11)] + ['y'], list(frame.columns))
        self.assertEqual('regression', self.read(out_dir, 'toy_summary.csv')['kind'][0])

    def test_toy_clusters_seeded(self):
        first = self.invoke('toy_clusters', 'experiments', 'toy', '--kind', 'clusters',
                            '--n', '12', '--seed', '4')
        frame = self.read(first, 'toy.csv')
        self.assertEqual(12, len(frame))
        self.assertEqual({-1, 1}, set(frame['y']))
        second = self.invoke('toy_clusters_again', '--seed', '4', 'experiments', 'toy',
                             '--kind', 'clusters', '--n', '12')
        self.assertTrue(filecmp.cmp(os.path.join(first, 'toy.csv'),
                                    os.path.join(second, 'toy.csv'), shallow=False))

    def test_toy_plane_rejects_d(self):
        self.assertEqual(2, run(['--project-dir', self.tmp_dir, '--out-dir',
                                 self.out_dir('toy_d'), 'experiments', 'toy', '--kind',
                                 'mixture', '--d', '3']))


class TestReplay(CliTestCase):

    def test_replay_reproduces_tables(self):
        first = self.invoke('original', '--seed', '11', 'select', '--data', self.regression,
                            '--B', '3', '--generations', '2', '--population', '8')
        second = self.out_dir('replayed')
        result = CliRunner().invoke(
            cli, ['--project-dir', self.tmp_dir, '--out-dir', second, 'replay',
                  os.path.join(first, 'manifest.yaml')]
        )
        self.assertEqual(0, result.exit_code, result.output + repr(result.exception))
        for name in ('select_frequencies.csv', 'select_universes.csv', 'select_summary.csv'):
            self.assertTrue(
                filecmp.cmp(os.path.join(first, name), os.path.join(second, name), shallow=False),
                name,
            )
        replayed = RunConfig.from_file(os.path.join(second, 'manifest.yaml'))
        self.assertEqual(11, replayed.params['seed'])
        self.assertEqual(second, replayed.params['out_dir'])

    def test_replay_experiment(self):
        first = self.invoke('fig4_original', 'experiments', 'fig4', '--n', '20', '--d', '3',
                            '--truth', '1')
        second = self.out_dir('fig4_replayed')
        result = CliRunner().invoke(
            cli, ['--project-dir', self.tmp_dir, '--out-dir', second, 'replay',
                  os.path.join(first, 'manifest.yaml')]
        )
        self.assertEqual(0, result.exit_code, result.output + repr(result.exception))
        self.assertTrue(filecmp.cmp(os.path.join(first, 'fig4_table.csv'),
                                    os.path.join(second, 'fig4_table.csv'), shallow=False))


class TestExitCodes(CliTestCase):

    def test_no_arguments(self):
        self.assertEqual(2, run([]))

    def test_usage_error(self):
        self.assertEqual(2, run(['no-such-command']))

    def test_missing_dataset(self):
        self.assertEqual(3, run(['--project-dir', self.tmp_dir, '--out-dir',
                                 self.out_dir('missing'), 'select', '--data',
                                 'no_such_file.csv']))

    def test_contract_violation(self):
        self.assertEqual(4, run(['--project-dir', self.tmp_dir, '--out-dir',
                                 self.out_dir('contract'), 'lago', 'rank', '--data',
                                 self.rare, '--K', '100000']))

    def test_config_error(self):
        self.assertEqual(2, run(['--project-dir', self.tmp_dir, '--out-dir',
                                 self.out_dir('grid'), 'svm', 'grid', '--data',
                                 self.clusters]))
