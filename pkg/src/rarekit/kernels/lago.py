#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Rare-target ranking with locally adjusted gaussian kernels.

Every training point of the rare class becomes a kernel center. A center's
radius is the average distance to its K nearest background points, so
centers deep in rare territory get wide kernels and centers surrounded by
background get narrow ones. The ranking function is

    f(x) = sum_i |R_i| phi(x; x_i, alpha R_i)

with phi the gaussian density with diagonal scale matrix R. The determinant
|R_i| cancels against the normalising constant of phi, leaving

    f(x) = sum_i exp(-||(x - x_i) / (alpha r_i)||^2 / 2) / ((2 pi)^(d/2) alpha^d)
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import partial
from typing import Dict, Optional, Sequence

import numpy as np
import pandas as pd

from scipy.spatial.distance import cdist

from rarekit.constants import (
    DEFAULT_ALPHA,
    DEFAULT_ALPHA_GRID,
    DEFAULT_NEIGHBOURS,
    FitStatus,
    LagoVariant,
    RADIUS_FLOOR_FACTOR,
)
from rarekit.data import Dataset
from rarekit.exceptions import (
    ContractException,
    DimensionMismatchException,
    FoldSkipped,
)
from rarekit.logger import KitLogger
from rarekit.metrics import FoldPlan, KFoldResult, average_precision, kfold

logger = KitLogger()


def _check_neighbours(K: int, n_background: int):
    if K < 1:
        raise ContractException(f'Neighbour count K must be positive, got {K}')
    if K > n_background:
        raise ContractException(
            f'K={K} neighbours requested but only {n_background} background points'
        )


def nearest_background(center, background: np.ndarray, K: int) -> np.ndarray:
    """
    Row indices of the K background points nearest to center by Euclidean
    distance, nearest first. Equal distances go to the lower row index.
    """
    background = np.atleast_2d(np.asarray(background, dtype=np.float64))
    _check_neighbours(K, background.shape[0])
    center = np.asarray(center, dtype=np.float64).reshape(1, -1)
    distances = cdist(center, background)[0]
    return np.argsort(distances, kind='stable')[:K]


def knn_background_radius(center, background, K: int) -> float:
    """
    Mean Euclidean distance from center to its K nearest background points.

    Args:
        center: d-vector
        background: n0 x d matrix
        K: Number of neighbours, at most n0

    Returns:
        Radius

    """
    background = np.atleast_2d(np.asarray(background, dtype=np.float64))
    center = np.asarray(center, dtype=np.float64).ravel()
    if background.shape[1] != center.size:
        raise DimensionMismatchException(
            f'Center has {center.size} coordinates, background {background.shape[1]}'
        )
    idx = nearest_background(center, background, K)
    return float(np.linalg.norm(background[idx] - center, axis=1).mean())


def radius_floor(features: np.ndarray) -> float:
    """
    Smallest admissible radius: a tiny fraction of the widest feature range.
    """
    spread = float(np.max(np.ptp(features, axis=0)))
    if spread <= 0:
        spread = 1.0
    return RADIUS_FLOOR_FACTOR * spread


@dataclass(frozen=True, eq=False)
class LagoModel:
    """
    Fitted ranking model.

    Attributes:
        centers: n1 x d rare-class training points
        radii: n1 radii (spherical) or n1 x d per-coordinate radii (elliptical)
        alpha: Global bandwidth multiplier
        K: Number of background neighbours behind each radius
        variant: Spherical or elliptical kernels
        r_floor: Lower bound applied to every radius

    """
    centers: np.ndarray
    radii: np.ndarray
    alpha: float
    K: int
    variant: LagoVariant
    r_floor: float

    @property
    def d(self) -> int:
        return self.centers.shape[1]

    def with_alpha(self, alpha: float) -> LagoModel:
        """
        Same centers and radii with another bandwidth multiplier.
        """
        if not alpha > 0:
            raise ContractException(f'Alpha must be positive, got {alpha}')
        return replace(self, alpha=float(alpha))


def fit_lago(ds: Dataset, K: int = DEFAULT_NEIGHBOURS, alpha: float = DEFAULT_ALPHA,
             variant: LagoVariant = LagoVariant.Spherical) -> LagoModel:
    """
    Fit the ranking model: all +1 rows become centers and get radii from
    their K nearest -1 rows.

    Args:
        ds: Classification dataset, +1 marking the rare class
        K: Number of background neighbours
        alpha: Global bandwidth multiplier
        variant: Spherical radii (mean distance) or elliptical radii (mean
                 absolute per-coordinate offset over the same neighbours)

    Returns:
        Fitted model

    """
    if not alpha > 0:
        raise ContractException(f'Alpha must be positive, got {alpha}')
    variant = LagoVariant(variant)
    labels = ds.labels
    centers = ds.features[labels == 1]
    background = ds.features[labels == -1]
    if centers.shape[0] == 0:
        raise ContractException('Training data has no rare-class (+1) rows')
    _check_neighbours(K, background.shape[0])

    distances = cdist(centers, background)
    neighbours = np.argsort(distances, axis=1, kind='stable')[:, :K]
    if variant == LagoVariant.Spherical:
        radii = np.take_along_axis(distances, neighbours, axis=1).mean(axis=1)
    else:
        offsets = np.abs(centers[:, np.newaxis, :] - background[neighbours])
        radii = offsets.mean(axis=1)

    r_floor = radius_floor(ds.features)
    floored = int(np.sum(radii < r_floor))
    if floored:
        logger.debug(f'{floored} LAGO radii raised to the floor {r_floor:.3g}')
    radii = np.maximum(radii, r_floor)
    radii.setflags(write=False)
    return LagoModel(
        centers=centers,
        radii=radii,
        alpha=float(alpha),
        K=K,
        variant=variant,
        r_floor=r_floor,
    )


def scores(model: LagoModel, X) -> np.ndarray:
    """
    Ranking scores for every row of X.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.d:
        raise DimensionMismatchException(
            f'Model was fitted on {model.d} features, got {X.shape[1]}'
        )
    d = model.d
    if model.variant == LagoVariant.Spherical:
        scaled = model.alpha * model.radii
        exponent = cdist(X, model.centers, 'sqeuclidean') / scaled[np.newaxis, :] ** 2
    else:
        exponent = np.empty((X.shape[0], model.centers.shape[0]))
        for i, (center, radius) in enumerate(zip(model.centers, model.radii)):
            exponent[:, i] = np.sum(((X - center) / (model.alpha * radius)) ** 2, axis=1)
    norm = d / 2.0 * np.log(2.0 * np.pi) + d * np.log(model.alpha)
    return np.exp(-0.5 * exponent - norm).sum(axis=1)


def score(model: LagoModel, x) -> float:
    """
    Ranking score of a single point. Larger means more likely rare.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    return float(scores(model, x.reshape(1, -1))[0])


@dataclass(frozen=True, eq=False)
class Ranking:
    """
    Rows ordered by descending score, ties by row index. order holds 0-based
    row indices; scores are indexed by row.
    """
    order: np.ndarray
    scores: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        """
        One line per row in ranked order: 1-based row_id, score and rank.
        """
        return pd.DataFrame({
            'row_id': self.order + 1,
            'score': self.scores[self.order],
            'rank': np.arange(1, self.order.size + 1),
        })


def rank(model: LagoModel, X_new) -> Ranking:
    values = scores(model, X_new)
    return Ranking(order=np.argsort(-values, kind='stable'), scores=values)


@dataclass(frozen=True)
class AlphaTuning:
    """
    Cross-validated average precision per alpha.
    """
    best_alpha: float
    average_precision: Dict[float, float]
    folds: Dict[float, KFoldResult]
    status: FitStatus = FitStatus.Ok

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'alpha': list(self.average_precision),
            'average_precision': list(self.average_precision.values()),
        })


def _fit_fold(train: Dataset, seed: int, K: int, alpha: float,
              variant: LagoVariant) -> LagoModel:
    if not np.any(train.labels == 1):
        raise FoldSkipped('training part has no rare-class rows')
    return fit_lago(train, K=K, alpha=alpha, variant=variant)


def _evaluate_fold(model: LagoModel, test: Dataset) -> float:
    if not np.any(test.labels == 1):
        raise FoldSkipped('test part has no rare-class rows')
    return average_precision(scores(model, test.features), test.labels)


def tune_alpha(ds: Dataset, K: int = DEFAULT_NEIGHBOURS,
               alphas: Sequence[float] = DEFAULT_ALPHA_GRID,
               folds: int = 5, seed: int = 0,
               variant: LagoVariant = LagoVariant.Spherical,
               workers: Optional[int] = None) -> AlphaTuning:
    """
    Pick alpha by k-fold cross-validated average precision.

    Args:
        ds: Classification dataset
        K: Number of background neighbours
        alphas: Candidate bandwidth multipliers
        folds: Number of folds
        seed: Seed of the fold plan
        variant: Spherical or elliptical radii
        workers: Number of folds evaluated concurrently

    Returns:
        Best alpha (first in grid order on ties) and the per-alpha scores.
        Folds without rare rows are skipped, logged and flagged in status

    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ContractException('Alpha grid is empty')
    if folds < 2:
        raise ContractException(f'Need at least 2 folds, got {folds}')
    plan = FoldPlan.create(ds.n, folds, seed)
    variant = LagoVariant(variant)

    # radii do not depend on alpha, fit them once per fold
    fitted: Dict[int, LagoModel] = {}

    def trainer(train: Dataset, fold_seed: int, alpha: float) -> LagoModel:
        if fold_seed not in fitted:
            fitted[fold_seed] = _fit_fold(train, fold_seed, K=K, alpha=alpha, variant=variant)
        return fitted[fold_seed].with_alpha(alpha)

    results = {}
    for alpha in alphas:
        results[alpha] = kfold(ds, plan, partial(trainer, alpha=alpha), _evaluate_fold,
                               workers=workers)
    ap = {alpha: result.mean for alpha, result in results.items()}
    best = max(alphas, key=lambda a: (ap[a], -alphas.index(a)))

    status = FitStatus.Ok
    if any(r.status != FitStatus.Ok for r in results.values()):
        status = FitStatus.FoldsSkipped
    logger.info(f'LAGO alpha tuning: best alpha {best:g} (AP {ap[best]:.4f})')
    return AlphaTuning(best_alpha=best, average_precision=ap, folds=results, status=status)
