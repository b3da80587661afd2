#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from __future__ import annotations

import math
import os

from dataclasses import dataclass
from typing import Dict, Hashable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from rarekit.constants import DATA_DIR_ENV, DEFAULT_LABEL_CODING
from rarekit.exceptions import (
    ContractException,
    DataException,
    MissingDatasetException,
)
from rarekit.logger import KitLogger
from rarekit.seeds import SeedTree
from rarekit.utils import write_table

logger = KitLogger()


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Row-aligned predictor matrix and response. The response holds class labels
    in {-1, +1} for classification or arbitrary reals for regression. Arrays
    are copied and made read-only, so datasets can be shared between workers.
    """
    features: np.ndarray
    response: np.ndarray
    feature_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        features = np.array(self.features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        if features.ndim != 2:
            raise DataException(f'Features must be a matrix, got {features.ndim} dimensions')
        n, d = features.shape
        if n < 1 or d < 1:
            raise DataException(f'Dataset needs n >= 1 and d >= 1, got n={n}, d={d}')
        if not np.all(np.isfinite(features)):
            raise DataException('Features contain NaN or infinite values')

        response = np.array(self.response, dtype=np.float64).ravel()
        if response.shape[0] != n:
            raise DataException(
                f'Response length {response.shape[0]} does not match {n} rows'
            )
        if not np.all(np.isfinite(response)):
            raise DataException('Response contains NaN or infinite values')

        names = self.feature_names
        if names is None:
            names = tuple(f'x{j + 1}' for j in range(d))
        names = tuple(str(name) for name in names)
        if len(names) != d:
            raise DataException(f'Got {len(names)} feature names for {d} columns')
        if len(set(names)) != d:
            raise DataException('Feature names must be distinct')

        features.setflags(write=False)
        response.setflags(write=False)
        object.__setattr__(self, 'features', features)
        object.__setattr__(self, 'response', response)
        object.__setattr__(self, 'feature_names', names)

    def __repr__(self):
        kind = 'classification' if self.is_classification else 'regression'
        return f'Dataset(n={self.n}, d={self.d}, {kind})'

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def is_classification(self) -> bool:
        """
        True if every response value is exactly -1 or +1.
        """
        return bool(np.all(np.abs(self.response) == 1.0))

    @property
    def labels(self) -> np.ndarray:
        """
        Class labels as integers in {-1, +1}.

        Raises:
            DataException: If the response is not a class label vector

        """
        if not self.is_classification:
            raise DataException('Dataset response is not coded as -1/+1 class labels')
        return self.response.astype(np.int64)

    def subset(self, rows: Sequence[int]) -> Dataset:
        """
        Dataset restricted to the given rows, in the given order. Repeated rows
        are kept, so bootstrap samples are valid subsets.
        """
        rows = np.asarray(rows, dtype=np.int64)
        if rows.size == 0:
            raise ContractException('Cannot build a dataset from zero rows')
        return Dataset(self.features[rows], self.response[rows], self.feature_names)


@dataclass(frozen=True)
class SplitSpec:
    """
    Train/test split parameters.
    """
    train_fraction: float
    seed: int

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ContractException(
                f'Train fraction must be in (0, 1), got {self.train_fraction}'
            )


def resolve_data_path(path: str) -> str:
    """
    Locate a dataset file. Relative paths that do not exist in the working
    directory are looked up in the configured data directory, then in the
    directory named by RAREKIT_DATA_DIR.

    Args:
        path: File path

    Returns:
        Existing file path

    Raises:
        MissingDatasetException: If the file cannot be found

    """
    path = os.path.expanduser(path)
    if os.path.isfile(path):
        return path
    if not os.path.isabs(path):
        from rarekit import config
        search_dirs = []
        if config.Config:
            search_dirs.append(config.Config.data_dir)
        if os.getenv(DATA_DIR_ENV):
            search_dirs.append(os.getenv(DATA_DIR_ENV))
        for data_dir in search_dirs:
            candidate = os.path.join(data_dir, path)
            if os.path.isfile(candidate):
                return candidate
    raise MissingDatasetException(path)


def _label_key(value: Hashable) -> Hashable:
    """
    Normalise a raw label so "1", "1.0", 1 and 1.0 all map to the same key.
    """
    try:
        number = float(value)
    except (TypeError, ValueError):
        return str(value).strip()
    if math.isfinite(number):
        return number
    return str(value).strip()


def _coding(label_coding: Optional[Mapping]) -> Dict[Hashable, int]:
    coding = dict(DEFAULT_LABEL_CODING)
    if label_coding:
        coding = {}
        for raw, coded in label_coding.items():
            if coded not in (-1, 1):
                raise DataException(f'Label coding must map to -1 or +1, got {coded!r}')
            coding[_label_key(raw)] = int(coded)
    return coding


def _read_frame(path: str) -> Tuple[str, pd.DataFrame]:
    """
    Resolved path and all cells of a CSV file as stripped strings, with the
    header checked for duplicate names.
    """
    columns = list(csv_columns(path))
    path = resolve_data_path(path)
    duplicates = sorted({c for c in columns if columns.count(c) > 1})
    if duplicates:
        raise DataException(f'{path!r} has duplicate column names: {duplicates}')

    frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                        skipinitialspace=True)
    frame.columns = columns
    if frame.empty:
        raise DataException(f'{path!r} has a header but no rows')
    return path, frame


def _feature_block(path: str, frame: pd.DataFrame,
                   feature_columns: Sequence[str]) -> np.ndarray:
    if not feature_columns:
        raise DataException(f'{path!r} has no feature columns')
    features = np.empty((len(frame), len(feature_columns)), dtype=np.float64)
    for j, column in enumerate(feature_columns):
        try:
            features[:, j] = frame[column].str.strip().to_numpy(dtype=np.float64)
        except ValueError as error:
            raise DataException(
                f'{path!r}: non-numeric cell in column {column!r} ({error})'
            )
    if not np.all(np.isfinite(features)):
        raise DataException(f'{path!r}: features contain NaN or infinite values')
    return features


def csv_columns(path: str) -> Tuple[str, ...]:
    """
    Column names from the header row of a CSV file.
    """
    path = resolve_data_path(path)
    try:
        header = pd.read_csv(path, header=None, nrows=1, dtype=str)
    except pd.errors.EmptyDataError:
        raise DataException(f'{path!r} is empty')
    return tuple(str(c).strip() for c in header.iloc[0].tolist())


def load_features(path: str, exclude: Sequence[str] = ()
                  ) -> Tuple[np.ndarray, Tuple[str, ...]]:
    """
    Load the predictor matrix of a CSV file without requiring a response
    column, i.e. new points to score with a saved model.

    Args:
        path: CSV file path
        exclude: Columns to leave out when present, i.e. the label column

    Returns:
        Feature matrix and the feature names in file order

    """
    path, frame = _read_frame(path)
    feature_columns = [c for c in frame.columns if c not in set(exclude)]
    features = _feature_block(path, frame, feature_columns)
    logger.info(f'Loaded {features.shape[0]} x {features.shape[1]} features from {path}')
    return features, tuple(feature_columns)


def load_csv(path: str, label_column: str,
             label_coding: Optional[Mapping] = None,
             regression: bool = False) -> Dataset:
    """
    Load a dataset from a CSV file with a mandatory header row.

    Args:
        path: CSV file path
        label_column: Name of the response column
        label_coding: Mapping from raw labels to -1/+1. Defaults to
                      {0: -1, 1: +1} plus the identity on {-1, +1}
        regression: Keep the response as real numbers instead of coding it

    Returns:
        Dataset with the label column removed from the features and the
        remaining columns in file order

    Raises:
        MissingDatasetException: If the file does not exist
        DataException: On duplicate column names, non-numeric cells, unknown
                       labels or a missing label column

    """
    path, frame = _read_frame(path)
    if label_column not in frame.columns:
        raise DataException(f'{path!r} has no column named {label_column!r}')
    feature_columns = [c for c in frame.columns if c != label_column]
    features = _feature_block(path, frame, feature_columns)

    raw_labels = frame[label_column].str.strip()
    if regression:
        try:
            response = raw_labels.to_numpy(dtype=np.float64)
        except ValueError as error:
            raise DataException(f'{path!r}: non-numeric response ({error})')
    else:
        coding = _coding(label_coding)
        response = np.empty(len(frame), dtype=np.float64)
        for i, raw in enumerate(raw_labels):
            key = _label_key(raw)
            if key not in coding:
                raise DataException(
                    f'{path!r}: label {raw!r} in row {i + 1} is not covered by '
                    f'the label coding'
                )
            response[i] = coding[key]

    dataset = Dataset(features, response, tuple(feature_columns))
    logger.info(f'Loaded {dataset!r} from {path}')
    return dataset


def write_csv(ds: Dataset, path: str, label_column: str = 'y') -> str:
    """
    Write a dataset as CSV, features first and the response last. Floats are
    written with 17 significant digits, so load_csv() reads back the exact
    values.

    Args:
        ds: Dataset
        path: CSV file path
        label_column: Name of the response column

    Returns:
        Path written to

    """
    if label_column in ds.feature_names:
        raise DataException(f'Label column {label_column!r} clashes with a feature name')
    frame = pd.DataFrame(ds.features, columns=list(ds.feature_names))
    if ds.is_classification:
        frame[label_column] = ds.labels
    else:
        frame[label_column] = ds.response
    return write_table(frame, path)


def split_indices(n: int, spec: SplitSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Unstratified random split of row indices.

    Args:
        n: Number of rows
        spec: Split parameters

    Returns:
        Sorted train indices and sorted test indices

    Raises:
        ContractException: If either part would be empty

    """
    if n < 2:
        raise ContractException(f'Cannot split {n} rows')
    n_train = int(math.floor(spec.train_fraction * n + 0.5))
    if n_train < 1 or n_train > n - 1:
        raise ContractException(
            f'Train fraction {spec.train_fraction} of {n} rows leaves an empty partition'
        )
    order = SeedTree(spec.seed).rng().permutation(n)
    return np.sort(order[:n_train]), np.sort(order[n_train:])


def split(ds: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset]:
    """
    Split a dataset into train and test parts.

    Args:
        ds: Dataset
        spec: Split parameters

    Returns:
        Train dataset and test dataset, rows in original order

    """
    train_idx, test_idx = split_indices(ds.n, spec)
    return ds.subset(train_idx), ds.subset(test_idx)


def feature_matrix(data: Union[Dataset, np.ndarray, Sequence]) -> np.ndarray:
    """
    Predictor matrix of a dataset, or a plain array checked to be a finite
    matrix. Lets the unsupervised code paths take either.
    """
    if isinstance(data, Dataset):
        return data.features
    features = np.asarray(data, dtype=np.float64)
    if features.ndim == 1:
        features = features.reshape(-1, 1)
    if features.ndim != 2 or features.shape[0] < 1 or features.shape[1] < 1:
        raise DataException(f'Expected a non-empty matrix, got shape {features.shape}')
    if not np.all(np.isfinite(features)):
        raise DataException('Features contain NaN or infinite values')
    return features
