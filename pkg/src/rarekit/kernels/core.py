#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from scipy.spatial.distance import cdist

from rarekit.constants import DEFAULT_BANDWIDTH, KernelKind
from rarekit.exceptions import ContractException, DimensionMismatchException


@dataclass(frozen=True)
class KernelSpec:
    """
    Kernel function and its bandwidth. The gaussian kernel is
    exp(-h * ||u - v||^2), with h inside the exponent.
    """
    kind: KernelKind = KernelKind.Gaussian
    h: float = DEFAULT_BANDWIDTH

    def __post_init__(self):
        kind = self.kind
        if not isinstance(kind, KernelKind):
            try:
                kind = KernelKind(str(kind))
            except ValueError:
                raise ContractException(
                    f'Unknown kernel {self.kind!r}, expected one of '
                    f'{[k.value for k in KernelKind]}'
                )
            object.__setattr__(self, 'kind', kind)
        if kind == KernelKind.Gaussian and not self.h > 0:
            raise ContractException(f'Gaussian bandwidth h must be positive, got {self.h}')
        object.__setattr__(self, 'h', float(self.h))

    @classmethod
    def linear(cls) -> KernelSpec:
        return cls(KernelKind.Linear)

    @classmethod
    def gaussian(cls, h: float = DEFAULT_BANDWIDTH) -> KernelSpec:
        return cls(KernelKind.Gaussian, h)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """
    Kernel values between two point sets, rows indexing the first set.
    """
    values: np.ndarray
    centered: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ContractException('Gram values must be a matrix')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    @property
    def is_square(self) -> bool:
        return self.values.shape[0] == self.values.shape[1]

    def to_frame(self) -> pd.DataFrame:
        """
        Gram values as a table with columns k1..km, for CSV export.
        """
        columns = [f'k{j + 1}' for j in range(self.values.shape[1])]
        return pd.DataFrame(self.values, columns=columns)


def _as_matrix(values) -> np.ndarray:
    matrix = np.asarray(values, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2:
        raise DimensionMismatchException(f'Expected a matrix, got {matrix.ndim} dimensions')
    return matrix


def kernel_eval(spec: KernelSpec, u, v) -> float:
    """
    Evaluate the kernel on a single pair of points.

    Args:
        spec: Kernel
        u: d-vector
        v: d-vector

    Returns:
        Kernel value

    """
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    if u.shape != v.shape:
        raise DimensionMismatchException(
            f'Cannot evaluate a kernel on vectors of length {u.size} and {v.size}'
        )
    if spec.kind == KernelKind.Linear:
        return float(u @ v)
    diff = u - v
    return float(np.exp(-spec.h * (diff @ diff)))


def gram(spec: KernelSpec, A, B=None) -> GramMatrix:
    """
    Kernel values between every row of A and every row of B.

    Args:
        spec: Kernel
        A: n x d matrix
        B: m x d matrix. Defaults to A

    Returns:
        Uncentered n x m Gram matrix

    """
    A = _as_matrix(A)
    B = A if B is None else _as_matrix(B)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchException(
            f'Point sets have dimensions {A.shape[1]} and {B.shape[1]}'
        )
    if spec.kind == KernelKind.Linear:
        values = A @ B.T
    else:
        values = np.exp(-spec.h * cdist(A, B, 'sqeuclidean'))
    return GramMatrix(values)


def center_cross_gram(cross: Union[GramMatrix, np.ndarray],
                      column_means: np.ndarray,
                      grand_mean: float) -> GramMatrix:
    """
    Center kernel values of new points against the training points, using
    the column means and grand mean of the uncentered training Gram matrix.
    """
    if isinstance(cross, GramMatrix):
        if cross.centered:
            raise ContractException('Cross Gram matrix is already centered')
        cross = cross.values
    cross = np.asarray(cross, dtype=np.float64)
    if cross.shape[1] != column_means.shape[0]:
        raise DimensionMismatchException(
            f'Cross Gram has {cross.shape[1]} columns, training set has '
            f'{column_means.shape[0]} points'
        )
    values = (
        cross
        - column_means[np.newaxis, :]
        - cross.mean(axis=1)[:, np.newaxis]
        + grand_mean
    )
    return GramMatrix(values, centered=True)


def center_gram(self_gram: GramMatrix,
                cross_gram: Optional[GramMatrix] = None
                ) -> Tuple[GramMatrix, Optional[GramMatrix]]:
    """
    Center a Gram matrix in feature space, i.e. the Gram matrix the
    column-centered feature vectors would have. New points in cross_gram are
    centered with the training means, so they share the training origin.

    Args:
        self_gram: Uncentered n x n training Gram matrix
        cross_gram: Optional uncentered m x n Gram matrix of new points

    Returns:
        Centered training Gram matrix, centered cross Gram matrix or None

    """
    if self_gram.centered:
        raise ContractException('Gram matrix is already centered')
    if not self_gram.is_square:
        raise DimensionMismatchException(
            f'Training Gram matrix must be square, got {self_gram.shape}'
        )
    K = self_gram.values
    column_means = K.mean(axis=0)
    row_means = K.mean(axis=1)
    grand_mean = K.mean()
    centered = (
        K
        - column_means[np.newaxis, :]
        - row_means[:, np.newaxis]
        + grand_mean
    )
    centered_cross = None
    if cross_gram is not None:
        centered_cross = center_cross_gram(cross_gram, column_means, grand_mean)
    return GramMatrix(centered, centered=True), centered_cross
