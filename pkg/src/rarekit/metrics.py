#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np

from rarekit.constants import ExecutorKind, FitStatus
from rarekit.data import Dataset
from rarekit.exceptions import (
    ContractException,
    DimensionMismatchException,
    FoldException,
    FoldSkipped,
)
from rarekit.exchange import JobExchange
from rarekit.logger import KitLogger
from rarekit.seeds import SeedTree

logger = KitLogger()


DEFAULT_CUTOFFS = (10, 50, 100)


def misclassification(preds, truth) -> int:
    """
    Number of positions where the predicted and true labels disagree.
    """
    preds = np.asarray(preds).ravel()
    truth = np.asarray(truth).ravel()
    if preds.shape != truth.shape:
        raise DimensionMismatchException(
            f'Got {preds.size} predictions for {truth.size} labels'
        )
    return int(np.sum(preds != truth))


def ranking_order(scores) -> np.ndarray:
    """
    Row indices by descending score. Equal scores keep row order.
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    return np.argsort(-scores, kind='stable')


def _positives_in_order(scores, truth) -> np.ndarray:
    scores = np.asarray(scores, dtype=np.float64).ravel()
    truth = np.asarray(truth).ravel()
    if scores.shape != truth.shape:
        raise DimensionMismatchException(
            f'Got {scores.size} scores for {truth.size} labels'
        )
    return truth[ranking_order(scores)] == 1


def average_precision(scores, truth) -> float:
    """
    Mean over the positives of the precision at each positive's rank.

    Args:
        scores: Ranking scores, larger means more likely positive
        truth: Labels in {-1, +1}

    Returns:
        Average precision in [0, 1]

    Raises:
        ContractException: If there are no positives

    """
    hits = _positives_in_order(scores, truth)
    n_pos = int(hits.sum())
    if n_pos == 0:
        raise ContractException('Average precision needs at least one positive')
    ranks = np.flatnonzero(hits) + 1
    return float(np.mean(np.arange(1, n_pos + 1) / ranks))


def hits_at_k(scores, truth, cutoffs: Sequence[int] = DEFAULT_CUTOFFS) -> Dict[int, int]:
    """
    Number of positives among the top k rows, for every cutoff k.
    """
    hits = np.cumsum(_positives_in_order(scores, truth))
    counts = {}
    for k in sorted(int(c) for c in cutoffs):
        if k < 1:
            raise ContractException(f'Cutoffs must be positive, got {k}')
        counts[k] = int(hits[min(k, hits.size) - 1])
    return counts


@dataclass(frozen=True)
class RankingEval:
    average_precision: float
    hits_at_k: Dict[int, int] = field(default_factory=dict)


def evaluate_ranking(scores, truth,
                     cutoffs: Sequence[int] = DEFAULT_CUTOFFS) -> RankingEval:
    return RankingEval(
        average_precision=average_precision(scores, truth),
        hits_at_k=hits_at_k(scores, truth, cutoffs),
    )


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """
    Assignment of n rows to k folds, labelled 1..k. Fold sizes differ by at
    most one.
    """
    k: int
    assignment: np.ndarray
    seed: int

    @classmethod
    def create(cls, n: int, k: int, seed: int) -> FoldPlan:
        """
        Random fold assignment: rows are shuffled and dealt round robin.

        Args:
            n: Number of rows
            k: Number of folds
            seed: Seed

        Returns:
            Fold plan

        """
        if not 2 <= k <= n:
            raise ContractException(f'Need 2 <= k <= n = {n}, got k={k}')
        order = SeedTree(seed).rng().permutation(n)
        assignment = np.empty(n, dtype=np.int64)
        assignment[order] = np.arange(n) % k + 1
        assignment.setflags(write=False)
        return cls(k=k, assignment=assignment, seed=seed)

    @property
    def n(self) -> int:
        return self.assignment.size

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)

    def fold_seed(self, fold: int) -> int:
        """
        Seed handed to the trainer of the given fold.
        """
        return SeedTree(self.seed, (fold,)).seed


@dataclass(frozen=True)
class KFoldResult:
    """
    Per-fold metric values and their mean. Skipped folds are listed with the
    reason and left out of the mean.
    """
    per_fold: Dict[int, float]
    skipped: Dict[int, str]
    mean: float
    status: FitStatus = FitStatus.Ok


def _run_fold(job) -> Optional[Any]:
    ds, plan, fold, trainer, evaluator = job
    try:
        train = ds.subset(plan.train_indices(fold))
        test = ds.subset(plan.test_indices(fold))
        model = trainer(train, plan.fold_seed(fold))
        return fold, float(evaluator(model, test)), None
    except FoldSkipped as skipped:
        return fold, None, str(skipped)
    except Exception as error:
        raise FoldException(fold, error) from error


def kfold(ds: Dataset, plan: FoldPlan, trainer: Callable[[Dataset, int], Any],
          evaluator: Callable[[Any, Dataset], float],
          workers: Optional[int] = None) -> KFoldResult:
    """
    k-fold cross-validation.

    Args:
        ds: Dataset
        plan: Fold plan over ds
        trainer: Callable(train, seed) returning a model. The seed is derived
                 from the plan seed and the fold label
        evaluator: Callable(model, test) returning a metric value
        workers: Number of folds evaluated concurrently

    Returns:
        Per-fold values and mean

    Raises:
        FoldException: If a trainer or evaluator fails, carrying the fold

    """
    if plan.n != ds.n:
        raise DimensionMismatchException(
            f'Fold plan covers {plan.n} rows, dataset has {ds.n}'
        )
    jobs = [(ds, plan, fold, trainer, evaluator) for fold in range(1, plan.k + 1)]
    results = JobExchange.map(_run_fold, jobs, workers=workers,
                              kind=ExecutorKind.Thread)

    per_fold, skipped = {}, {}
    for fold, value, reason in results:
        if reason is not None:
            logger.warning(f'Fold {fold} skipped: {reason}')
            skipped[fold] = reason
        else:
            per_fold[fold] = value
    if not per_fold:
        raise ContractException(f'All {plan.k} folds were skipped')
    status = FitStatus.FoldsSkipped if skipped else FitStatus.Ok
    mean = float(np.mean([per_fold[f] for f in sorted(per_fold)]))
    return KFoldResult(per_fold=per_fold, skipped=skipped, mean=mean, status=status)
