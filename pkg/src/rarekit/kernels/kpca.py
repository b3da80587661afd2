#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from dataclasses import dataclass
from typing import Optional

import numpy as np

from scipy.linalg import eigh

from rarekit.constants import FitStatus, KPCA_RELATIVE_TOL
from rarekit.data import feature_matrix
from rarekit.exceptions import ContractException, DimensionMismatchException
from rarekit.kernels.core import (
    KernelSpec,
    center_cross_gram,
    center_gram,
    gram,
)
from rarekit.logger import KitLogger

logger = KitLogger()


@dataclass(frozen=True, eq=False)
class KpcaModel:
    """
    Fitted kernel principal components.

    Attributes:
        alphas: n x q' coefficients over the training points, scaled so that
                eigenvalue_j * alpha_j' alpha_j = 1
        eigenvalues: q' positive eigenvalues of the centered Gram matrix,
                     nonincreasing
        spec: Kernel the model was fitted with
        training_features: Training points, needed to project new data
        column_means: Column means of the uncentered training Gram matrix
        grand_mean: Grand mean of the uncentered training Gram matrix
        training_scores: n x q' projections of the training points
        requested: Number of components asked for
        status: FitStatus.RankDeficient if fewer than requested survived

    """
    alphas: np.ndarray
    eigenvalues: np.ndarray
    spec: KernelSpec
    training_features: np.ndarray
    column_means: np.ndarray
    grand_mean: float
    training_scores: np.ndarray
    requested: int
    status: FitStatus = FitStatus.Ok

    @property
    def q(self) -> int:
        """
        Number of retained components.
        """
        return self.alphas.shape[1]


def fit_kpca(ds, spec: KernelSpec, q: int,
             tol_eig: Optional[float] = None) -> KpcaModel:
    """
    Fit kernel PCA by solving K_c alpha = lambda alpha on the centered Gram
    matrix.

    Args:
        ds: Dataset or n x d matrix
        spec: Kernel
        q: Number of components
        tol_eig: Eigenvalues at or below this are dropped. Defaults to
                 1e-10 times the largest eigenvalue

    Returns:
        Fitted model. If fewer than q eigenvalues exceed tol_eig the model
        keeps the ones that do and carries FitStatus.RankDeficient

    """
    features = feature_matrix(ds)
    n = features.shape[0]
    if not 1 <= q <= n:
        raise ContractException(f'Need 1 <= q <= n = {n}, got q={q}')
    if tol_eig is not None and not tol_eig > 0:
        raise ContractException(f'Eigenvalue tolerance must be positive, got {tol_eig}')

    raw = gram(spec, features)
    centered, _ = center_gram(raw)
    eigenvalues, eigenvectors = eigh(centered.values)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]

    largest = eigenvalues[0]
    if largest <= 0:
        keep = 0
    else:
        tol = KPCA_RELATIVE_TOL * largest if tol_eig is None else tol_eig
        keep = min(q, int(np.sum(eigenvalues > tol)))

    eigenvalues = eigenvalues[:keep].copy()
    alphas = eigenvectors[:, :keep] / np.sqrt(eigenvalues)[np.newaxis, :]
    for j in range(keep):
        pivot = np.argmax(np.abs(alphas[:, j]))
        if alphas[pivot, j] < 0:
            alphas[:, j] = -alphas[:, j]

    status = FitStatus.Ok
    if keep < q:
        status = FitStatus.RankDeficient
        logger.warning(
            f'Kernel PCA: only {keep} of {q} requested components have '
            f'eigenvalues above tolerance'
        )

    raw_values = raw.values
    return KpcaModel(
        alphas=alphas,
        eigenvalues=eigenvalues,
        spec=spec,
        training_features=features,
        column_means=raw_values.mean(axis=0),
        grand_mean=float(raw_values.mean()),
        training_scores=centered.values @ alphas,
        requested=q,
        status=status,
    )


def project(model: KpcaModel, X_new) -> np.ndarray:
    """
    Project new points onto the retained kernel principal components.

    Args:
        model: Fitted model
        X_new: m x d matrix

    Returns:
        m x q' scores

    """
    X_new = feature_matrix(X_new)
    d = model.training_features.shape[1]
    if X_new.shape[1] != d:
        raise DimensionMismatchException(
            f'Model was fitted on {d} features, got {X_new.shape[1]}'
        )
    cross = gram(model.spec, X_new, model.training_features)
    centered = center_cross_gram(cross, model.column_means, model.grand_mean)
    return centered.values @ model.alphas
