#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np

from unittest import TestCase

from rarekit import ContractException, DimensionMismatchException
from rarekit.constants import CanonicalStatus
from rarekit.data import Dataset
from rarekit.kernels.core import KernelSpec
from rarekit.kernels.svm import (
    Hyperplane,
    check_canonical,
    empirical_margin,
    gamma_to_lambda,
    hinge_objective,
    margin,
    optimal_bias,
    sensitivity_grid,
    signed_distance,
    train_kernel_hinge,
)
from rarekit.metrics import misclassification
from rarekit.seeds import SeedTree
from rarekit.toys import separated_clusters


class TestGeometry(TestCase):

    def setUp(self) -> None:
        self.ds = Dataset([[1.0, 0.0], [-1.0, 0.0], [2.0, 1.0]], [1, -1, 1])

    def test_hyperplane(self):
        h = Hyperplane([3.0, 4.0], 0.0)
        self.assertEqual(5.0, h.norm)
        self.assertAlmostEqual(0.4, margin(h))
        self.assertAlmostEqual(5.0, signed_distance(h, [3.0, 4.0]))
        self.assertAlmostEqual(-1.0, signed_distance(Hyperplane([1.0, 0.0], 1.0), [-2.0, 5.0]))
        with self.assertRaises(ContractException):
            Hyperplane([0.0, 0.0])
        with self.assertRaises(DimensionMismatchException):
            h.decision([1.0, 2.0, 3.0])

    def test_canonical(self):
        canonical = Hyperplane([1.0, 0.0])
        self.assertEqual(CanonicalStatus.Canonical, check_canonical(canonical, self.ds))
        self.assertAlmostEqual(margin(canonical), empirical_margin(canonical, self.ds))
        self.assertEqual(CanonicalStatus.SeparatingNotCanonical,
                         check_canonical(Hyperplane([2.0, 0.0]), self.ds))
        flipped = Hyperplane([-1.0, 0.0])
        self.assertEqual(CanonicalStatus.NotSeparating, check_canonical(flipped, self.ds))
        self.assertLess(empirical_margin(flipped, self.ds), 0)

    def test_signed_distance_by_hand(self):
        h = Hyperplane([3.0, 4.0], -5.0)
        self.assertAlmostEqual(0.4, signed_distance(h, [1.0, 1.0]))
        self.assertAlmostEqual(-1.0, signed_distance(h, [0.0, 0.0]))
        for c in (0.5, 2.0, 7.0):
            scaled = Hyperplane([3.0 * c, 4.0 * c], -5.0 * c)
            self.assertAlmostEqual(signed_distance(h, [1.0, 1.0]),
                                   signed_distance(scaled, [1.0, 1.0]))
            self.assertAlmostEqual(margin(h) / c, margin(scaled))


class TestObjective(TestCase):

    def test_hinge_objective(self):
        labels = np.array([1.0, -1.0])
        self.assertAlmostEqual(2.0, hinge_objective(labels, [0.5, 0.5], 3.0, 0.0))
        self.assertAlmostEqual(2.3, hinge_objective(labels, [0.5, 0.5], 3.0, 0.1))
        with self.assertRaises(DimensionMismatchException):
            hinge_objective(labels, [0.5], 1.0, 0.1)

    def test_gamma_to_lambda(self):
        self.assertEqual(0.25, gamma_to_lambda(2.0))
        with self.assertRaises(ContractException):
            gamma_to_lambda(0.0)

    def test_optimal_bias_flat_minimum(self):
        y = np.array([1.0, 1.0, -1.0, -1.0])
        self.assertEqual(0.0, optimal_bias(y, np.zeros(4)))

    def test_optimal_bias_one_class(self):
        self.assertEqual(1.0, optimal_bias(np.array([1.0]), np.array([0.0])))

    def test_optimal_bias_is_minimal(self):
        rng = np.random.default_rng(2)
        y = np.where(rng.random(25) < 0.4, 1.0, -1.0)
        g = rng.standard_normal(25)
        b = optimal_bias(y, g)

        def loss(bias):
            return np.sum(np.maximum(0.0, 1.0 - y * (g + bias)))

        for other in np.linspace(-4.0, 4.0, 161):
            self.assertLessEqual(loss(b), loss(other) + 1e-9)

    def test_objective_is_convex(self):
        rng = np.random.default_rng(6)
        ds = separated_clusters(seed=6, n=12, gap=1.0)
        K = rng.standard_normal((12, 12))
        K = K @ K.T
        for _ in range(20):
            c1, c2 = rng.standard_normal(12), rng.standard_normal(12)
            b1, b2 = rng.standard_normal(2)

            def objective(c, b):
                return hinge_objective(ds, K @ c + b, float(c @ K @ c), 0.3)

            middle = objective((c1 + c2) / 2.0, (b1 + b2) / 2.0)
            self.assertLessEqual(middle, (objective(c1, b1) + objective(c2, b2)) / 2.0 + 1e-9)


class TestTraining(TestCase):

    def setUp(self) -> None:
        self.ds = separated_clusters(seed=3, n=40, gap=10.0)

    def test_separable_linear(self):
        model = train_kernel_hinge(self.ds, KernelSpec.linear(), gamma_to_lambda(10.0), seed=1)
        self.assertEqual(0, misclassification(model.predict(self.ds.features), self.ds.labels))
        self.assertLessEqual(model.objective, model.objective_history[0])
        self.assertTrue(np.all(np.diff(model.best_history) <= 0))
        self.assertEqual(11, len(model.objective_history))
        hyperplane = model.hyperplane()
        np.testing.assert_allclose(model.decision_function(self.ds.features),
                                   hyperplane.decision(self.ds.features), atol=1e-9)

    def test_gaussian(self):
        model = train_kernel_hinge(self.ds, KernelSpec.gaussian(0.1), 0.05, epochs=5, seed=2)
        self.assertEqual(0, misclassification(model.predict(self.ds.features), self.ds.labels))
        with self.assertRaises(ContractException):
            model.hyperplane()
        with self.assertRaises(DimensionMismatchException):
            model.decision_function(np.zeros((1, 5)))

    def test_seeded_order(self):
        epochs, seed = 3, 9
        seeded = train_kernel_hinge(self.ds, KernelSpec.linear(), 0.1, epochs=epochs, seed=seed)
        orders = [SeedTree(seed, (e,)).rng().permutation(self.ds.n) for e in range(epochs)]
        explicit = train_kernel_hinge(self.ds, KernelSpec.linear(), 0.1, epochs=epochs,
                                      sample_order=orders)
        np.testing.assert_array_equal(seeded.coefficients, explicit.coefficients)
        self.assertEqual(seeded.beta0, explicit.beta0)

    def test_invalid(self):
        with self.assertRaises(ContractException):
            train_kernel_hinge(self.ds, KernelSpec.linear(), 0.0)
        with self.assertRaises(ContractException):
            train_kernel_hinge(self.ds, KernelSpec.linear(), 0.1, epochs=0)

    def test_gaussian_kernel_separates_xor(self):
        xor = Dataset([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]], [1, 1, -1, -1])
        lam = gamma_to_lambda(10.0)
        # a hinge sum below 1 leaves every point on its own side
        curved = train_kernel_hinge(xor, KernelSpec.gaussian(1.0), lam, epochs=500, seed=3)
        self.assertLess(curved.objective, 1.0)
        self.assertEqual(0, misclassification(curved.predict(xor.features), xor.labels))
        # no linear f does better than sum_i (1 - y_i f(x_i)) = 4 here
        flat = train_kernel_hinge(xor, KernelSpec.linear(), lam, epochs=20, seed=3)
        self.assertGreaterEqual(flat.objective, 4.0 - 1e-9)
        self.assertGreaterEqual(misclassification(flat.predict(xor.features), xor.labels), 1)


class TestSensitivityGrid(TestCase):

    def test_grid(self):
        train = separated_clusters(seed=1, n=30, gap=3.0)
        test = separated_clusters(seed=2, n=20, gap=3.0)
        grid = sensitivity_grid(train, test, [1.0, 10.0], [0.1, 1.0], seed=5, epochs=2)
        self.assertEqual(['gamma', 'h', 'errors'], list(grid.columns))
        self.assertEqual([1.0, 1.0, 10.0, 10.0], grid['gamma'].tolist())
        self.assertEqual([0.1, 1.0, 0.1, 1.0], grid['h'].tolist())
        self.assertTrue(grid['errors'].between(0, 20).all())
        again = sensitivity_grid(train, test, [1.0, 10.0], [0.1, 1.0], seed=5, epochs=2)
        self.assertEqual(grid['errors'].tolist(), again['errors'].tolist())
