#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from rarekit.constants import CanonicalStatus, DEFAULT_EPOCHS, KernelKind
from rarekit.data import Dataset
from rarekit.exceptions import ContractException, DimensionMismatchException
from rarekit.exchange import JobExchange
from rarekit.kernels.core import KernelSpec, gram
from rarekit.logger import KitLogger
from rarekit.metrics import misclassification
from rarekit.seeds import SeedTree

logger = KitLogger()


CANONICAL_LOWER_TOL = 1e-9
CANONICAL_EQUAL_TOL = 1e-6
BIAS_TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """
    The hyperplane beta'x + beta0 = 0.
    """
    beta: np.ndarray
    beta0: float = 0.0

    def __post_init__(self):
        beta = np.array(self.beta, dtype=np.float64).ravel()
        if not np.any(beta):
            raise ContractException('Hyperplane normal vector beta is all zero')
        beta.setflags(write=False)
        object.__setattr__(self, 'beta', beta)
        object.__setattr__(self, 'beta0', float(self.beta0))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.beta))

    def decision(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.beta.size:
            raise DimensionMismatchException(
                f'Hyperplane lives in {self.beta.size} dimensions, points in {X.shape[1]}'
            )
        return X @ self.beta + self.beta0


def signed_distance(h: Hyperplane, x) -> float:
    """
    Signed Euclidean distance from x to the hyperplane, positive on the side
    beta points to.
    """
    return float(h.decision(x)[0] / h.norm)


def margin(h: Hyperplane) -> float:
    """
    Margin 2 / ||beta|| of a canonical hyperplane.
    """
    return 2.0 / h.norm


def empirical_margin(h: Hyperplane, ds: Dataset) -> float:
    """
    Twice the smallest signed distance y_i * d_i over the dataset. Equals
    margin(h) when h is canonical for ds and is negative when h does not
    separate the classes.
    """
    distances = h.decision(ds.features) / h.norm
    return float(2.0 * np.min(ds.labels * distances))


def check_canonical(h: Hyperplane, ds: Dataset) -> CanonicalStatus:
    """
    Classify a hyperplane against a labelled dataset.

    Args:
        h: Hyperplane
        ds: Classification dataset

    Returns:
        Canonical if min_i y_i f(x_i) is 1, SeparatingNotCanonical if it is
        positive otherwise and NotSeparating if it is not positive

    """
    smallest = float(np.min(ds.labels * h.decision(ds.features)))
    if smallest >= 1.0 - CANONICAL_LOWER_TOL and abs(smallest - 1.0) <= CANONICAL_EQUAL_TOL:
        return CanonicalStatus.Canonical
    if smallest > 0:
        return CanonicalStatus.SeparatingNotCanonical
    return CanonicalStatus.NotSeparating


def _labels(ds: Union[Dataset, np.ndarray]) -> np.ndarray:
    if isinstance(ds, Dataset):
        return ds.labels.astype(np.float64)
    return np.asarray(ds, dtype=np.float64).ravel()


def hinge_objective(ds: Union[Dataset, np.ndarray], f_values,
                    beta_norm_sq: float, lam: float) -> float:
    """
    Hinge loss plus ridge penalty:
    sum_i max(0, 1 - y_i f_i) + lam * ||beta||^2.

    Args:
        ds: Classification dataset, or its labels
        f_values: Decision values f(x_i)
        beta_norm_sq: Squared norm of beta. In kernel form this is c'Kc for
                      expansion coefficients c
        lam: Ridge weight

    Returns:
        Objective value

    """
    if lam < 0:
        raise ContractException(f'Ridge weight must be nonnegative, got {lam}')
    y = _labels(ds)
    f_values = np.asarray(f_values, dtype=np.float64).ravel()
    if f_values.shape != y.shape:
        raise DimensionMismatchException(
            f'Got {f_values.size} decision values for {y.size} labels'
        )
    return float(np.sum(np.maximum(0.0, 1.0 - y * f_values)) + lam * beta_norm_sq)


def gamma_to_lambda(gamma: float) -> float:
    """
    Ridge weight equivalent to the cost parameter gamma of the
    slack-variable formulation: lam = 1 / (2 gamma).
    """
    if not gamma > 0:
        raise ContractException(f'Cost parameter gamma must be positive, got {gamma}')
    return 1.0 / (2.0 * gamma)


def optimal_bias(y: np.ndarray, g: np.ndarray) -> float:
    """
    Exact minimiser over b of sum_i max(0, 1 - y_i (g_i + b)).

    The sum is convex and piecewise linear with breakpoints b = y_i - g_i, so
    its minimum is attained at a breakpoint. When the minimum is a flat
    stretch, the midpoint of the stretch is returned.
    """
    positive = y > 0
    upper = np.sort(1.0 - g[positive])
    lower = np.sort(-1.0 - g[~positive])
    candidates = np.unique(np.concatenate([upper, lower]))

    upper_cum = np.concatenate([[0.0], np.cumsum(upper)])
    idx = np.searchsorted(upper, candidates, side='right')
    loss = (upper_cum[-1] - upper_cum[idx]) - candidates * (upper.size - idx)

    lower_cum = np.concatenate([[0.0], np.cumsum(lower)])
    idx = np.searchsorted(lower, candidates, side='left')
    loss += candidates * idx - lower_cum[idx]

    best = loss.min()
    flat = candidates[loss <= best + BIAS_TIE_TOL * max(1.0, abs(best))]
    return float(0.5 * (flat[0] + flat[-1]))


@dataclass(frozen=True, eq=False)
class KernelClassifier:
    """
    Kernel expansion f(x) = sum_i c_i K(x, x_i) + beta0 with c_i = alpha_i y_i.

    Attributes:
        coefficients: Signed expansion coefficients c over the training points
        beta0: Intercept
        spec: Kernel
        training_features: Training points
        training_labels: Training labels in {-1, +1}
        lam: Ridge weight
        objective_history: Objective of the start model and of every epoch's
                           averaged model
        best_epoch: Index into objective_history of the returned model

    """
    coefficients: np.ndarray
    beta0: float
    spec: KernelSpec
    training_features: np.ndarray
    training_labels: np.ndarray
    lam: float
    objective_history: Tuple[float, ...]
    best_epoch: int

    @property
    def alphas(self) -> np.ndarray:
        return self.coefficients * self.training_labels

    @property
    def objective(self) -> float:
        return self.objective_history[self.best_epoch]

    @property
    def best_history(self) -> np.ndarray:
        """
        Running best of the objective history.
        """
        return np.minimum.accumulate(np.asarray(self.objective_history))

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.training_features.shape[1]:
            raise DimensionMismatchException(
                f'Classifier was trained on {self.training_features.shape[1]} '
                f'features, got {X.shape[1]}'
            )
        return gram(self.spec, X, self.training_features).values @ self.coefficients + self.beta0

    def predict(self, X) -> np.ndarray:
        """
        Class labels, with decision value 0 mapped to +1.
        """
        return np.where(self.decision_function(X) >= 0, 1, -1)

    def hyperplane(self) -> Hyperplane:
        """
        Explicit hyperplane of a linear-kernel classifier.
        """
        if self.spec.kind != KernelKind.Linear:
            raise ContractException('Only linear-kernel classifiers have an explicit hyperplane')
        return Hyperplane(self.training_features.T @ self.coefficients, self.beta0)


def _evaluate(K, y, coefficients, lam) -> Tuple[float, float]:
    g = K @ coefficients
    beta0 = optimal_bias(y, g)
    objective = hinge_objective(y, g + beta0, float(coefficients @ g), lam)
    return beta0, objective


def train_kernel_hinge(ds: Dataset, spec: KernelSpec, lam: float,
                       epochs: int = DEFAULT_EPOCHS, seed: int = 0,
                       sample_order: Optional[Sequence[Sequence[int]]] = None
                       ) -> KernelClassifier:
    """
    Minimise sum_i max(0, 1 - y_i f(x_i)) + lam * ||beta||^2 over the kernel
    expansion by stochastic subgradient descent.

    Each epoch visits every training point once in a random order, taking
    steps of size 1 / (lam' t) on the per-point objective with
    lam' = 2 lam / n. The coefficients of an epoch's iterates are averaged
    and the unpenalised intercept is then set to its exact optimum. The model
    with the lowest objective among the start model (c = 0) and the epoch
    averages is returned.

    Args:
        ds: Classification dataset
        spec: Kernel
        lam: Ridge weight, positive
        epochs: Number of passes over the data
        seed: Seed of the visiting order. Epoch e uses SeedTree(seed, (e,))
        sample_order: Optional explicit visiting order per epoch, overriding
                      the seeded one

    Returns:
        Trained classifier

    """
    if not lam > 0:
        raise ContractException(f'Ridge weight must be positive, got {lam}')
    if epochs < 1:
        raise ContractException(f'Need at least one epoch, got {epochs}')
    if sample_order is not None and len(sample_order) < epochs:
        raise ContractException(
            f'Got {len(sample_order)} visiting orders for {epochs} epochs'
        )
    y = ds.labels.astype(np.float64)
    n = ds.n
    K = gram(spec, ds.features).values
    step_lam = 2.0 * lam / n

    counts = np.zeros(n)
    # K @ (counts * y), kept up to date as counts change
    kernel_sum = np.zeros(n)

    best_coefficients = np.zeros(n)
    best_beta0, best_objective = _evaluate(K, y, best_coefficients, lam)
    history = [best_objective]
    best_epoch = 0
    beta0 = best_beta0

    t = 0
    for epoch in range(epochs):
        if sample_order is not None:
            order = np.asarray(sample_order[epoch], dtype=np.int64)
        else:
            order = SeedTree(seed, (epoch,)).rng().permutation(n)
        average = np.zeros(n)
        for i in order:
            t += 1
            scale = 1.0 / (step_lam * t)
            if y[i] * (scale * kernel_sum[i] + beta0) < 1.0:
                counts[i] += 1.0
                kernel_sum += y[i] * K[:, i]
            average += counts * y * scale
        average /= len(order)

        beta0, objective = _evaluate(K, y, average, lam)
        history.append(objective)
        if objective < best_objective:
            best_objective = objective
            best_coefficients = average
            best_beta0 = beta0
            best_epoch = epoch + 1
        logger.debug(f'Hinge epoch {epoch + 1}/{epochs}: objective {objective:.6g}')

    return KernelClassifier(
        coefficients=best_coefficients,
        beta0=best_beta0,
        spec=spec,
        training_features=ds.features,
        training_labels=y,
        lam=lam,
        objective_history=tuple(history),
        best_epoch=best_epoch,
    )


def _grid_cell(job) -> Tuple[float, float, int]:
    train, test, gamma, h, seed, epochs = job
    model = train_kernel_hinge(train, KernelSpec.gaussian(h), gamma_to_lambda(gamma),
                               epochs=epochs, seed=seed)
    return gamma, h, misclassification(model.predict(test.features), test.labels)


def sensitivity_grid(ds_train: Dataset, ds_test: Dataset,
                     gammas: Sequence[float], hs: Sequence[float],
                     seed: int, epochs: int = DEFAULT_EPOCHS,
                     workers: Optional[int] = None) -> pd.DataFrame:
    """
    Test misclassification counts of gaussian-kernel classifiers over a grid
    of cost parameters gamma and bandwidths h.

    Args:
        ds_train: Training data
        ds_test: Test data
        gammas: Cost parameters, mapped to lam = 1 / (2 gamma)
        hs: Gaussian bandwidths
        seed: Master seed. Cell (i, j) trains with SeedTree(seed, (i, j))
        epochs: Epochs per classifier
        workers: Number of cells trained concurrently

    Returns:
        Table with columns gamma, h, errors, one row per cell, gamma-major

    """
    gammas, hs = list(gammas), list(hs)
    if not gammas or not hs:
        raise ContractException('Sensitivity grid needs at least one gamma and one h')
    jobs = [
        (ds_train, ds_test, gamma, h, SeedTree(seed, (i, j)).seed, epochs)
        for i, gamma in enumerate(gammas)
        for j, h in enumerate(hs)
    ]
    logger.info(f'Training {len(jobs)} kernel classifiers for the sensitivity grid')
    rows = JobExchange.map(_grid_cell, jobs, workers=workers)
    return pd.DataFrame(rows, columns=['gamma', 'h', 'errors'])
