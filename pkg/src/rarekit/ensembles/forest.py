#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from rarekit.constants import DEFAULT_TREES
from rarekit.data import Dataset
from rarekit.ensembles.trees import DecisionTree, fit_tree
from rarekit.exceptions import ContractException
from rarekit.exchange import JobExchange
from rarekit.logger import KitLogger
from rarekit.metrics import misclassification
from rarekit.seeds import SeedTree

logger = KitLogger()


@dataclass(frozen=True, eq=False)
class Forest:
    """
    Majority-vote ensemble of unpruned trees.

    Attributes:
        members: Trees
        m: Features drawn per split
        B: Number of trees
        seed: Master seed
        tree_seeds: (bootstrap seed, split seed) of every tree, for replay
        bootstrap: False if every tree saw the full training set

    """
    members: Tuple[DecisionTree, ...]
    m: int
    B: int
    seed: int
    tree_seeds: Tuple[Tuple[int, int], ...]
    bootstrap: bool = True

    def votes(self, X) -> np.ndarray:
        """
        B x m matrix of member predictions.
        """
        return np.vstack([tree.predict(X) for tree in self.members])

    def decision_function(self, X) -> np.ndarray:
        """
        Mean vote in [-1, 1].
        """
        return self.votes(X).mean(axis=0)

    def predict(self, X) -> np.ndarray:
        """
        Unweighted majority vote, ties to +1.
        """
        return np.where(self.votes(X).sum(axis=0) >= 0, 1, -1)


def tree_seeds(seed: int, b: int) -> Tuple[int, int]:
    """
    Bootstrap and split seeds of tree b.
    """
    return SeedTree(seed, (b, 0)).seed, SeedTree(seed, (b, 1)).seed


def _grow_member(job) -> DecisionTree:
    ds, m, bootstrap_seed, split_seed, bootstrap = job
    sample = None
    if bootstrap:
        sample = np.random.default_rng(bootstrap_seed).integers(0, ds.n, ds.n)
    return fit_tree(ds, sample, m=m, seed=split_seed)


def random_forest(ds: Dataset, B: int = DEFAULT_TREES, m: Optional[int] = None,
                  seed: int = 0, bootstrap: bool = True,
                  workers: Optional[int] = None) -> Forest:
    """
    Breiman's random forest: B maximal trees, each grown on its own bootstrap
    resample of n rows, drawing m candidate features before every split.

    Args:
        ds: Classification dataset
        B: Number of trees
        m: Features drawn per split. Defaults to d, which is bagging
        seed: Master seed
        bootstrap: Draw bootstrap samples. Off, every tree uses all rows once
        workers: Number of trees grown concurrently

    Returns:
        Forest

    """
    m = ds.d if m is None else int(m)
    if B < 1:
        raise ContractException(f'Need at least one tree, got B={B}')
    if not 1 <= m <= ds.d:
        raise ContractException(f'Need 1 <= m <= d = {ds.d}, got m={m}')
    seeds = tuple(tree_seeds(seed, b) for b in range(B))
    jobs = [(ds, m, boot, split, bootstrap) for boot, split in seeds]
    members = JobExchange.map(_grow_member, jobs, workers=workers)
    return Forest(
        members=tuple(members),
        m=m,
        B=B,
        seed=seed,
        tree_seeds=seeds,
        bootstrap=bootstrap,
    )


def bagging(ds: Dataset, B: int = DEFAULT_TREES, seed: int = 0,
            workers: Optional[int] = None) -> Forest:
    """
    Bootstrap aggregation: a random forest that considers every feature at
    every split.
    """
    return random_forest(ds, B=B, m=ds.d, seed=seed, workers=workers)


def forest_grid(ds_train: Dataset, ds_test: Dataset, ms: Sequence[int],
                Bs: Sequence[int], seed: int,
                workers: Optional[int] = None) -> pd.DataFrame:
    """
    Test misclassification counts of random forests over a grid of subset
    sizes m and forest sizes B.

    For every m a single forest of max(Bs) trees is grown with master seed
    SeedTree(seed, (m,)); the forest of size B is its first B trees.

    Args:
        ds_train: Training data
        ds_test: Test data
        ms: Subset sizes
        Bs: Forest sizes
        seed: Master seed
        workers: Number of trees grown concurrently

    Returns:
        Table with columns m, B, errors, one row per cell, m-major

    """
    ms, Bs = [int(m) for m in ms], [int(b) for b in Bs]
    if not ms or not Bs:
        raise ContractException('Forest grid needs at least one m and one B')
    if min(Bs) < 1:
        raise ContractException(f'Forest sizes must be positive, got {Bs}')
    largest = max(Bs)
    truth = ds_test.labels
    rows = []
    for m in ms:
        logger.info(f'Growing {largest} trees with m={m}')
        forest = random_forest(ds_train, B=largest, m=m,
                               seed=SeedTree(seed, (m,)).seed, workers=workers)
        running = np.cumsum(forest.votes(ds_test.features), axis=0)
        for B in Bs:
            predictions = np.where(running[B - 1] >= 0, 1, -1)
            rows.append((m, B, misclassification(predictions, truth)))
    return pd.DataFrame(rows, columns=['m', 'B', 'errors'])
