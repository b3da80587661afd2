#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np

from unittest import TestCase

from rarekit import ContractException, DimensionMismatchException, FoldException
from rarekit.constants import FitStatus
from rarekit.data import Dataset
from rarekit.exceptions import FoldSkipped
from rarekit.metrics import (
    FoldPlan,
    average_precision,
    evaluate_ranking,
    hits_at_k,
    kfold,
    misclassification,
)


class TestClassification(TestCase):

    def test_misclassification(self):
        self.assertEqual(2, misclassification([1, -1, 1, 1], [1, 1, -1, 1]))
        self.assertEqual(0, misclassification([], []))
        with self.assertRaises(DimensionMismatchException):
            misclassification([1], [1, -1])


class TestRanking(TestCase):

    def test_average_precision(self):
        self.assertAlmostEqual(
            (1.0 + 2.0 / 3.0) / 2.0,
            average_precision([0.9, 0.8, 0.7, 0.6], [1, -1, 1, -1]),
        )

    def test_ties_keep_row_order(self):
        self.assertEqual(0.5, average_precision([1.0, 1.0], [-1, 1]))
        self.assertEqual(1.0, average_precision([1.0, 1.0], [1, -1]))

    def test_average_precision_with_ties(self):
        rng = np.random.default_rng(9)
        scores = np.round(rng.random(40), 1)
        truth = np.where(rng.random(40) < 0.3, 1, -1)
        truth[0] = 1
        order = sorted(range(40), key=lambda i: (-scores[i], i))
        found, precisions = 0, []
        for rank, i in enumerate(order, start=1):
            if truth[i] == 1:
                found += 1
                precisions.append(found / rank)
        self.assertAlmostEqual(float(np.mean(precisions)), average_precision(scores, truth))

    def test_monotone_transform_keeps_average_precision(self):
        rng = np.random.default_rng(10)
        scores = np.round(rng.standard_normal(30), 1)
        truth = np.where(rng.random(30) < 0.4, 1, -1)
        truth[3] = 1
        self.assertEqual(average_precision(scores, truth),
                         average_precision(np.exp(3.0 * scores) + 1.0, truth))


    def test_no_positives(self):
        with self.assertRaises(ContractException):
            average_precision([0.3, 0.2], [-1, -1])

    def test_hits_at_k(self):
        scores = [0.1, 0.9, 0.5, 0.7]
        truth = [1, 1, -1, -1]
        self.assertEqual({1: 1, 2: 1, 10: 2}, hits_at_k(scores, truth, (10, 1, 2)))
        with self.assertRaises(ContractException):
            hits_at_k(scores, truth, (0,))

    def test_evaluate_ranking(self):
        result = evaluate_ranking([0.9, 0.1], [1, -1], cutoffs=(1,))
        self.assertEqual(1.0, result.average_precision)
        self.assertEqual({1: 1}, result.hits_at_k)


class TestFoldPlan(TestCase):

    def test_balanced_partition(self):
        plan = FoldPlan.create(10, 3, seed=4)
        sizes = sorted(plan.test_indices(f).size for f in range(1, 4))
        self.assertEqual([3, 3, 4], sizes)
        self.assertEqual({1, 2, 3}, set(plan.assignment.tolist()))
        np.testing.assert_array_equal(
            np.arange(10), np.sort(np.concatenate([plan.train_indices(1), plan.test_indices(1)]))
        )

    def test_deterministic(self):
        np.testing.assert_array_equal(
            FoldPlan.create(20, 4, seed=1).assignment,
            FoldPlan.create(20, 4, seed=1).assignment,
        )
        self.assertNotEqual(FoldPlan.create(20, 4, 1).fold_seed(1),
                            FoldPlan.create(20, 4, 1).fold_seed(2))

    def test_invalid(self):
        with self.assertRaises(ContractException):
            FoldPlan.create(10, 1, seed=0)
        with self.assertRaises(ContractException):
            FoldPlan.create(3, 4, seed=0)


def mean_trainer(train, seed):
    return float(train.response.mean())


def skip_first_row(model, test):
    if 0.0 in test.features[:, 0]:
        raise FoldSkipped('holds the first row')
    return model


def fail_first_row(model, test):
    if 0.0 in test.features[:, 0]:
        raise RuntimeError('first row')
    return model


class TestKFold(TestCase):

    def setUp(self) -> None:
        self.ds = Dataset(np.arange(12.0).reshape(-1, 1), np.arange(12.0))
        self.plan = FoldPlan.create(12, 3, seed=6)

    def test_per_fold_values(self):
        result = kfold(self.ds, self.plan, mean_trainer, lambda model, test: model)
        self.assertEqual(FitStatus.Ok, result.status)
        self.assertEqual([1, 2, 3], sorted(result.per_fold))
        for fold, value in result.per_fold.items():
            train = self.plan.train_indices(fold)
            self.assertAlmostEqual(train.mean(), value)
        self.assertAlmostEqual(np.mean(list(result.per_fold.values())), result.mean)

    def test_skipped_fold(self):
        first = int(self.plan.assignment[0])
        result = kfold(self.ds, self.plan, mean_trainer, skip_first_row)
        self.assertEqual(FitStatus.FoldsSkipped, result.status)
        self.assertEqual([first], list(result.skipped))
        self.assertNotIn(first, result.per_fold)
        self.assertEqual(2, len(result.per_fold))

    def test_failure_names_fold(self):
        first = int(self.plan.assignment[0])
        with self.assertRaises(FoldException) as context:
            kfold(self.ds, self.plan, mean_trainer, fail_first_row)
        self.assertEqual(first, context.exception.fold)

    def test_all_skipped(self):
        def skip_all(model, test):
            raise FoldSkipped('nothing to evaluate')

        with self.assertRaises(ContractException):
            kfold(self.ds, self.plan, mean_trainer, skip_all)

    def test_plan_must_cover_dataset(self):
        with self.assertRaises(DimensionMismatchException):
            kfold(self.ds, FoldPlan.create(10, 2, 0), mean_trainer, skip_first_row)
