#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

import numpy as np

from unittest import TestCase

from rarekit import BaseLearnerException, ContractException
from rarekit.constants import FitStatus
from rarekit.data import Dataset
from rarekit.ensembles.boosting import adaboost, boosting_grid, tree_learner
from rarekit.toys import spam_fallback


class TestAdaBoost(TestCase):

    def setUp(self) -> None:
        self.ds = spam_fallback(seed=3, n=200, d=5, informative=3)

    def test_reweighted_error_is_one_half(self):
        ensemble = adaboost(self.ds, B=20)
        self.assertGreater(len(ensemble.rounds), 1)
        for r in ensemble.rounds:
            if not r.capped:
                self.assertAlmostEqual(0.5, r.reweighted_error, places=10)
                self.assertAlmostEqual(math.log((1.0 - r.error) / r.error), r.vote)

    def test_history(self):
        ensemble = adaboost(self.ds, B=5)
        history = ensemble.history()
        self.assertEqual(len(ensemble.rounds), len(history))
        self.assertEqual(
            ['round', 'error', 'ratio', 'vote', 'reweighted_error', 'exp_loss',
             'train_errors', 'capped'],
            list(history.columns),
        )
        self.assertEqual(list(range(1, len(history) + 1)), history['round'].tolist())

    def test_weighted_vote(self):
        ensemble = adaboost(self.ds, B=10)
        expected = sum(
            vote * member.predict(self.ds.features)
            for member, vote in zip(ensemble.members, ensemble.votes)
        )
        np.testing.assert_allclose(expected, ensemble.decision_function(self.ds.features))
        last = ensemble.rounds[-1]
        self.assertEqual(last.train_errors,
                         int(np.sum(ensemble.predict(self.ds.features) != self.ds.labels)))

    def test_perfect_learner_is_capped(self):
        ds = Dataset([[1.0], [2.0], [3.0], [4.0]], [-1, -1, 1, 1])
        ensemble = adaboost(ds, B=10)
        self.assertEqual(1, len(ensemble.rounds))
        self.assertTrue(ensemble.rounds[0].capped)
        self.assertAlmostEqual(7.0, ensemble.rounds[0].ratio)
        self.assertAlmostEqual(math.log(7.0), ensemble.votes[0])
        self.assertEqual(FitStatus.Ok, ensemble.status)

    def test_useless_first_learner(self):
        ds = Dataset(np.zeros((4, 1)), [1, -1, 1, -1])
        with self.assertRaises(BaseLearnerException):
            adaboost(ds, B=3)

    def test_tree_base_learner(self):
        ensemble = adaboost(self.ds, B=5, base=tree_learner(2), seed=4)
        self.assertTrue(all(member.depth <= 2 for member in ensemble.members))
        with self.assertRaises(ContractException):
            tree_learner(0)
        with self.assertRaises(ContractException):
            adaboost(self.ds, B=0)

    def test_single_round_by_hand(self):
        ds = Dataset([[1.0], [2.0], [3.0], [4.0]], [1, 1, -1, 1])
        ensemble = adaboost(ds, B=1)
        stump = ensemble.members[0]
        self.assertEqual((0, 2.5), (stump.feature[0], stump.threshold[0]))
        np.testing.assert_array_equal([1, 1, -1, -1], stump.predict(ds.features))
        r = ensemble.rounds[0]
        self.assertAlmostEqual(0.25, r.error)
        self.assertAlmostEqual(3.0, r.ratio)
        self.assertAlmostEqual(math.log(3.0), r.vote)
        self.assertAlmostEqual(0.5, r.reweighted_error)
        self.assertAlmostEqual(4.0, r.exp_loss)
        self.assertEqual(1, r.train_errors)
        self.assertFalse(r.capped)

    def test_crossed_classes_by_hand(self):
        ds = Dataset([[1.0, 2.0], [2.0, 1.0], [3.0, 4.0], [4.0, 3.0]], [1, -1, -1, 1])
        ensemble = adaboost(ds, B=3)
        self.assertEqual([1, 1, 0], [r.train_errors for r in ensemble.rounds])
        np.testing.assert_allclose([0.25, 1.0 / 6.0, 0.1], [r.error for r in ensemble.rounds])
        np.testing.assert_allclose([math.log(3.0), math.log(5.0), math.log(9.0)],
                                   ensemble.votes)
        self.assertEqual(
            [(0, 1.5, -1), (0, 3.5, 1), (1, 1.5, 1)],
            [(int(m.feature[0]), float(m.threshold[0]), int(m.label[2]))
             for m in ensemble.members],
        )
        np.testing.assert_array_equal(ds.labels, ensemble.predict(ds.features))
        longer = adaboost(ds, B=10)
        self.assertEqual([1, 1, 0], [r.train_errors for r in longer.rounds[:3]])
        self.assertEqual(0, longer.rounds[-1].train_errors)



class TestBoostingGrid(TestCase):

    def setUp(self) -> None:
        self.train = spam_fallback(seed=5, n=150, d=6, informative=3)
        self.test = spam_fallback(seed=6, n=100, d=6, informative=3)

    def test_prefixes_match_shorter_runs(self):
        grid = boosting_grid(self.train, self.test, [1, 4, 9], seed=2)
        self.assertEqual(['B', 'rounds', 'errors'], list(grid.columns))
        self.assertEqual([1, 4, 9], grid['B'].tolist())
        for B, errors in zip(grid['B'], grid['errors']):
            ensemble = adaboost(self.train, B=int(B), seed=2)
            self.assertEqual(
                int(np.sum(ensemble.predict(self.test.features) != self.test.labels)),
                errors,
            )

    def test_early_stop_uses_every_round(self):
        ds = Dataset([[1.0], [2.0], [3.0], [4.0]], [-1, -1, 1, 1])
        grid = boosting_grid(ds, ds, [1, 5])
        self.assertEqual([1, 1], grid['rounds'].tolist())
        self.assertEqual([0, 0], grid['errors'].tolist())

    def test_invalid_grid(self):
        with self.assertRaises(ContractException):
            boosting_grid(self.train, self.test, [])
        with self.assertRaises(ContractException):
            boosting_grid(self.train, self.test, [0, 3])
