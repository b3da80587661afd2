#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Seeded synthetic datasets used by the experiments and the test suite.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from scipy.stats import norm

from rarekit.data import Dataset
from rarekit.exceptions import ContractException
from rarekit.seeds import SeedTree


TRUE_VARIABLES = (2, 5, 8)


def pga_toy(seed: int, n: int = 50, d: int = 10,
            truth: Sequence[int] = TRUE_VARIABLES,
            noise: float = 1.0) -> Dataset:
    """
    Linear regression toy for variable selection: iid N(0, 1) predictors and
    y = sum of the true predictors (unit coefficients) + N(0, noise^2).

    Args:
        seed: Master seed
        n: Number of observations
        d: Number of predictors
        truth: 1-based indices of the relevant predictors
        noise: Noise standard deviation

    Returns:
        Regression dataset with columns x1..xd

    """
    truth = [int(t) for t in truth]
    if any(t < 1 or t > d for t in truth):
        raise ContractException(f'True variables {truth} out of range 1..{d}')
    rng = SeedTree(seed).rng()
    features = rng.standard_normal((n, d))
    response = features[:, [t - 1 for t in truth]].sum(axis=1)
    response = response + noise * rng.standard_normal(n)
    return Dataset(features, response)


def spherical_toy(seed: int, n: int = 200,
                  max_radius: float = 3.0) -> Dataset:
    """
    Points in the plane with directions uniform on the circle and radii
    uniform on [0, max_radius]. The response is the radius.
    """
    rng = SeedTree(seed).rng()
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    radius = rng.uniform(0.0, max_radius, n)
    features = np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
    return Dataset(features, radius)


@dataclass(frozen=True)
class MixtureSpec:
    """
    Two-component Gaussian mixture in the plane. Background N(0, s0^2 I),
    rare class N(mu, s1^2 I) with prior rare_fraction.
    """
    rare_fraction: float = 0.05
    rare_mean: Tuple[float, float] = (1.5, 1.5)
    rare_scale: float = 0.5
    background_scale: float = 1.0

    def posterior(self, features: np.ndarray) -> np.ndarray:
        """
        Closed-form probability of the rare class given x.
        """
        features = np.asarray(features, dtype=np.float64)
        log_rare = norm.logpdf(
            features, loc=np.asarray(self.rare_mean), scale=self.rare_scale
        ).sum(axis=1) + np.log(self.rare_fraction)
        log_background = norm.logpdf(
            features, loc=0.0, scale=self.background_scale
        ).sum(axis=1) + np.log1p(-self.rare_fraction)
        return 1.0 / (1.0 + np.exp(log_background - log_rare))


def gaussian_mixture(seed: int, n: int = 1000,
                     spec: MixtureSpec = MixtureSpec()) -> Dataset:
    """
    Sample a labelled rare-class dataset from a Gaussian mixture. Labels are
    +1 for the rare class and -1 for the background. At least one point of
    each class is always present.
    """
    rng = SeedTree(seed).rng()
    rare = rng.random(n) < spec.rare_fraction
    if not rare.any():
        rare[0] = True
    if rare.all():
        rare[-1] = False
    features = spec.background_scale * rng.standard_normal((n, 2))
    features[rare] = (
        np.asarray(spec.rare_mean)
        + spec.rare_scale * rng.standard_normal((int(rare.sum()), 2))
    )
    return Dataset(features, np.where(rare, 1.0, -1.0))


def separated_clusters(seed: int, n: int = 40, d: int = 2,
                       gap: float = 4.0, rare_fraction: float = 0.5) -> Dataset:
    """
    Two unit-variance clusters whose means differ by gap along the first axis.
    """
    rng = SeedTree(seed).rng()
    n_pos = max(1, min(n - 1, int(round(rare_fraction * n))))
    labels = np.array([1.0] * n_pos + [-1.0] * (n - n_pos))
    features = rng.standard_normal((n, d))
    features[:, 0] += np.where(labels > 0, gap / 2.0, -gap / 2.0)
    return Dataset(features, labels)


def spam_fallback(seed: int, n: int = 1500, d: int = 30,
                  informative: int = 8) -> Dataset:
    """
    Stand-in for the spam data when no CSV is available: a binary problem with
    a handful of informative predictors, one interaction and label noise,
    buried among pure noise columns.
    """
    if informative < 3 or informative > d:
        raise ContractException(f'Need 3 <= informative <= d, got {informative}')
    rng = SeedTree(seed).rng()
    features = rng.standard_normal((n, d))
    weights = 1.0 / np.arange(1, informative + 1)
    latent = features[:, :informative] @ weights
    latent += features[:, 0] * features[:, 1]
    latent += 0.5 * (features[:, 2] ** 2 - 1.0)
    latent += 0.5 * rng.standard_normal(n)
    labels = np.where(latent > 0.0, 1.0, -1.0)
    return Dataset(features, labels)
