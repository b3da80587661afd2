#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np

from unittest import TestCase

from rarekit import ContractException
from rarekit.seeds import SeedTree, derive_seed, splitmix64


class TestSplitMix(TestCase):

    def test_reference_value(self):
        # First output of the reference SplitMix64 generator with state 0
        self.assertEqual(0xE220A8397B1DCDAF, splitmix64(0))

    def test_stays_in_64_bits(self):
        for value in (0, 1, 2 ** 63, 2 ** 64 - 1):
            self.assertTrue(0 <= splitmix64(value) < 2 ** 64)


class TestSeedTree(TestCase):

    def test_empty_path_is_master(self):
        self.assertEqual(42, SeedTree(42).seed)

    def test_deterministic(self):
        self.assertEqual(SeedTree(7, (1, 2)).seed, derive_seed(SeedTree(7, (1, 2))))

    def test_short_paths_differ(self):
        paths = [()]
        paths += [(a,) for a in range(256)]
        paths += [(a, b) for a in range(256) for b in range(256)]
        seeds = {SeedTree(7, path).seed for path in paths}
        self.assertEqual(1 + 256 + 256 * 256, len(seeds))

    def test_masters_differ(self):
        self.assertNotEqual(SeedTree(7, (1,)).seed, SeedTree(8, (1,)).seed)

    def test_child(self):
        self.assertEqual(SeedTree(3, (4, 5)), SeedTree(3, (4,)).child(5))
        self.assertEqual(SeedTree(3, (4, 5, 6)).seed, SeedTree(3).child(4, 5, 6).seed)

    def test_rng(self):
        first = SeedTree(11, (3,)).rng().random(5)
        second = np.random.default_rng(SeedTree(11, (3,)).seed).random(5)
        np.testing.assert_array_equal(first, second)

    def test_invalid(self):
        with self.assertRaises(ContractException):
            SeedTree(-1)
        with self.assertRaises(ContractException):
            SeedTree(2 ** 64)
        with self.assertRaises(ContractException):
            SeedTree(1, (2 ** 32,))
