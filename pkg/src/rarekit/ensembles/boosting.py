#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from __future__ import annotations

import math

from dataclasses import dataclass
from functools import partial
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from rarekit.constants import DEFAULT_ROUNDS, FitStatus
from rarekit.data import Dataset
from rarekit.ensembles.trees import DecisionTree, fit_stump, fit_tree
from rarekit.exceptions import BaseLearnerException, ContractException
from rarekit.logger import KitLogger
from rarekit.seeds import SeedTree

logger = KitLogger()


# Weighted learner: (dataset, weights, seed) -> tree
BaseLearner = Callable[[Dataset, np.ndarray, int], DecisionTree]

WEIGHT_RESCALE_LIMIT = 1e100


def stump_learner(ds: Dataset, weights: np.ndarray, seed: int) -> DecisionTree:
    return fit_stump(ds, weights)


def _depth_limited(ds: Dataset, weights: np.ndarray, seed: int,
                   max_depth: int) -> DecisionTree:
    return fit_tree(ds, seed=seed, max_depth=max_depth, weights=weights)


def tree_learner(max_depth: int) -> BaseLearner:
    """
    Weighted Gini tree of limited depth as a base learner. Depth 1 splits on
    the Gini criterion instead of the misclassification criterion of
    stump_learner.
    """
    if max_depth < 1:
        raise ContractException(f'Base tree depth must be at least 1, got {max_depth}')
    return partial(_depth_limited, max_depth=max_depth)


@dataclass(frozen=True)
class BoostRound:
    """
    Bookkeeping of one boosting round.

    Attributes:
        round: 1-based round number
        error: Weighted error of the new member before reweighting
        ratio: Right-to-wrong ratio (1 - error) / error
        vote: Vote weight log(ratio)
        reweighted_error: Weighted error of the new member under the updated
                          weights. 0.5 up to rounding for every uncapped round
        exp_loss: sum_i exp(-y_i F(x_i)) of the ensemble so far
        train_errors: Training misclassifications of the ensemble so far
        capped: True if the member was perfect and its ratio was capped

    """
    round: int
    error: float
    ratio: float
    vote: float
    reweighted_error: float
    exp_loss: float
    train_errors: int
    capped: bool = False


@dataclass(frozen=True, eq=False)
class BoostEnsemble:
    members: Tuple[DecisionTree, ...]
    votes: Tuple[float, ...]
    rounds: Tuple[BoostRound, ...]
    B: int
    status: FitStatus = FitStatus.Ok

    def decision_function(self, X) -> np.ndarray:
        """
        Weighted vote sum_b a_b f_b(x).
        """
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros(X.shape[0])
        for member, vote in zip(self.members, self.votes):
            total += vote * member.predict(X)
        return total

    def predict(self, X) -> np.ndarray:
        """
        Sign of the weighted vote, 0 mapped to +1.
        """
        return np.where(self.decision_function(X) >= 0, 1, -1)

    def history(self) -> pd.DataFrame:
        """
        Per-round bookkeeping as a table.
        """
        return pd.DataFrame([vars(r) for r in self.rounds])


def adaboost(ds: Dataset, B: int = DEFAULT_ROUNDS,
             base: Optional[BaseLearner] = None, seed: int = 0) -> BoostEnsemble:
    """
    AdaBoost with observation reweighting.

    Weights start at 1/n. Each round fits the base learner under the current
    weights, computes the weighted error e, the right-to-wrong ratio
    R = (1 - e) / e and the vote a = log R, and multiplies the weights of the
    misclassified points by R. Weights are not renormalised, which leaves
    the weighted error of the new member at exactly one half.

    A perfect member (e = 0) gets its ratio capped at (1 - e') / e' with
    e' = 1 / (2n), and boosting stops. A member with e >= 0.5 ends boosting;
    in the first round that is an error.

    Args:
        ds: Classification dataset
        B: Maximum number of rounds
        base: Base learner, stumps by default
        seed: Master seed. Round b hands SeedTree(seed, (b,)) to the learner

    Returns:
        Ensemble with per-round bookkeeping

    """
    if B < 1:
        raise ContractException(f'Need at least one boosting round, got {B}')
    base = base or stump_learner
    y = ds.labels
    n = ds.n
    weights = np.full(n, 1.0 / n)
    ensemble_margin = np.zeros(n)

    members, votes, rounds = [], [], []
    status = FitStatus.Ok
    for b in range(1, B + 1):
        member = base(ds, weights, SeedTree(seed, (b,)).seed)
        wrong = member.predict(ds.features) != y
        error = float(np.sum(weights[wrong]) / np.sum(weights))

        if error >= 0.5:
            if b == 1:
                raise BaseLearnerException(
                    f'Base learner has weighted error {error:.4f} >= 0.5 in the first round'
                )
            logger.warning(f'Boosting stopped at round {b}: weighted error {error:.4f} >= 0.5')
            status = FitStatus.EarlyStop
            break

        capped = error == 0.0
        if capped:
            floor = 1.0 / (2.0 * n)
            ratio = (1.0 - floor) / floor
        else:
            ratio = (1.0 - error) / error
        vote = math.log(ratio)

        weights[wrong] *= ratio
        total = np.sum(weights)
        if total > WEIGHT_RESCALE_LIMIT:
            # overflow guard, ratios are unchanged
            weights /= total
            total = 1.0
        reweighted = float(np.sum(weights[wrong]) / total)

        ensemble_margin += vote * member.predict(ds.features)
        predictions = np.where(ensemble_margin >= 0, 1, -1)
        members.append(member)
        votes.append(vote)
        rounds.append(BoostRound(
            round=b,
            error=error,
            ratio=ratio,
            vote=vote,
            reweighted_error=reweighted,
            exp_loss=float(np.sum(np.exp(-y * ensemble_margin))),
            train_errors=int(np.sum(predictions != y)),
            capped=capped,
        ))
        if capped:
            logger.info(f'Boosting stopped at round {b}: perfect base learner')
            break

    return BoostEnsemble(
        members=tuple(members),
        votes=tuple(votes),
        rounds=tuple(rounds),
        B=B,
        status=status,
    )


def boosting_grid(ds_train: Dataset, ds_test: Dataset, Bs: Sequence[int],
                  base: Optional[BaseLearner] = None, seed: int = 0) -> pd.DataFrame:
    """
    Test misclassification counts of AdaBoost over a range of round counts.

    A single ensemble of max(Bs) rounds is fitted; the ensemble of B rounds
    is its first B members, since the rounds are sequential and
    deterministic. If boosting stopped before B rounds, every fitted round
    is used.

    Args:
        ds_train: Training data
        ds_test: Test data
        Bs: Round counts
        base: Base learner, stumps by default
        seed: Master seed

    Returns:
        Table with columns B, rounds, errors, one row per round count

    """
    Bs = [int(b) for b in Bs]
    if not Bs:
        raise ContractException('Boosting grid needs at least one round count')
    if min(Bs) < 1:
        raise ContractException(f'Round counts must be positive, got {Bs}')
    ensemble = adaboost(ds_train, B=max(Bs), base=base, seed=seed)
    contributions = np.vstack([
        vote * member.predict(ds_test.features)
        for member, vote in zip(ensemble.members, ensemble.votes)
    ])
    running = np.cumsum(contributions, axis=0)
    truth = ds_test.labels
    rows = []
    for B in Bs:
        rounds = min(B, len(ensemble.members))
        predictions = np.where(running[rounds - 1] >= 0, 1, -1)
        rows.append((B, rounds, int(np.sum(predictions != truth))))
    return pd.DataFrame(rows, columns=['B', 'rounds', 'errors'])
