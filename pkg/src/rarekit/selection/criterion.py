#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from __future__ import annotations

import math

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from scipy.linalg import qr

from rarekit.constants import CriterionKind, EXHAUSTIVE_MAX_VARIABLES, RSS_FLOOR_FACTOR
from rarekit.data import Dataset
from rarekit.exceptions import ContractException
from rarekit.logger import KitLogger

logger = KitLogger()


@dataclass(frozen=True)
class SubsetMask:
    """
    Subset of d variables stored as the bits of an integer; bit j set means
    variable j (0-based) is in the subset. The empty subset is the
    intercept-only model.
    """
    bits: int
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ContractException(f'Masks need d >= 1, got {self.d}')
        if self.bits < 0 or self.bits >> self.d:
            raise ContractException(f'Mask bits {self.bits} out of range for d={self.d}')

    @classmethod
    def from_indices(cls, indices: Iterable[int], d: int) -> SubsetMask:
        """
        Mask from 0-based variable indices.
        """
        bits = 0
        for j in indices:
            j = int(j)
            if not 0 <= j < d:
                raise ContractException(f'Variable index {j} out of range for d={d}')
            bits |= 1 << j
        return cls(bits, d)

    @classmethod
    def from_array(cls, flags) -> SubsetMask:
        flags = np.asarray(flags, dtype=bool).ravel()
        return cls.from_indices(np.flatnonzero(flags), flags.size)

    @property
    def indices(self) -> Tuple[int, ...]:
        """
        0-based indices of the members, ascending.
        """
        return tuple(j for j in range(self.d) if self.bits >> j & 1)

    @property
    def size(self) -> int:
        return bin(self.bits).count('1')

    def __contains__(self, j: int) -> bool:
        return bool(self.bits >> j & 1)

    def toggle(self, j: int) -> SubsetMask:
        return SubsetMask(self.bits ^ (1 << j), self.d)

    def issuperset(self, other: SubsetMask) -> bool:
        return self.bits & other.bits == other.bits

    def to_array(self) -> np.ndarray:
        return np.array([j in self for j in range(self.d)], dtype=bool)

    def label(self, names: Optional[Sequence[str]] = None) -> str:
        """
        Members as a comma separated string, by name or 1-based index.
        """
        if names is None:
            return ','.join(str(j + 1) for j in self.indices)
        return ','.join(names[j] for j in self.indices)


@dataclass(frozen=True)
class CriterionSpec:
    """
    Penalty multiplier gamma of F = n ln(RSS / n) + gamma (|w| + 1).
    """
    gamma: float
    kind: CriterionKind = CriterionKind.Custom

    def __post_init__(self):
        if not self.gamma > 0:
            raise ContractException(f'Penalty gamma must be positive, got {self.gamma}')

    @classmethod
    def aic(cls) -> CriterionSpec:
        return cls(2.0, CriterionKind.AIC)

    @classmethod
    def bic(cls, n: int) -> CriterionSpec:
        return cls(math.log(n), CriterionKind.BIC)

    @classmethod
    def custom(cls, gamma: float) -> CriterionSpec:
        return cls(float(gamma), CriterionKind.Custom)

    @classmethod
    def for_kind(cls, kind, n: int, gamma: Optional[float] = None) -> CriterionSpec:
        """
        Spec from a kind name, as given on the command line.
        """
        kind = CriterionKind(kind)
        if kind == CriterionKind.AIC:
            return cls.aic()
        if kind == CriterionKind.BIC:
            return cls.bic(n)
        if gamma is None:
            raise ContractException('A custom criterion needs a gamma value')
        return cls.custom(gamma)


def residual_sum_of_squares(ds: Dataset, mask: SubsetMask) -> float:
    """
    RSS of the least-squares fit of the response on an intercept plus the
    masked columns, via column-pivoted QR. Returns inf if the design is
    rank deficient.
    """
    n = ds.n
    design = np.column_stack([np.ones(n), ds.features[:, list(mask.indices)]])
    q, r, _ = qr(design, mode='economic', pivoting=True)
    diagonal = np.abs(np.diag(r))
    tol = max(design.shape) * np.finfo(np.float64).eps * diagonal[0]
    if np.any(diagonal <= tol):
        return math.inf
    y = ds.response
    residual = y - q @ (q.T @ y)
    return float(residual @ residual)


def criterion(ds: Dataset, mask: SubsetMask, spec: CriterionSpec) -> float:
    """
    Penalised fit F = n ln(RSS / n) + gamma (|w| + 1), lower is better.

    RSS is floored at 1e-12 times the centered total sum of squares before
    taking the logarithm, so exact fits stay finite.

    Args:
        ds: Regression dataset
        mask: Variable subset
        spec: Penalty

    Returns:
        Criterion value, or inf if the design is rank deficient

    """
    if mask.d != ds.d:
        raise ContractException(f'Mask is over {mask.d} variables, dataset has {ds.d}')
    n, k = ds.n, mask.size
    if n <= k + 1:
        raise ContractException(f'Cannot fit {k} variables plus intercept to {n} rows')
    rss = residual_sum_of_squares(ds, mask)
    if math.isinf(rss):
        logger.debug(f'Rank deficient design for variables {mask.label()}')
        return math.inf
    y = ds.response
    tss = float(np.sum((y - y.mean()) ** 2))
    floor = RSS_FLOOR_FACTOR * tss if tss > 0 else np.finfo(np.float64).tiny
    rss = max(rss, floor)
    return n * math.log(rss / n) + spec.gamma * (k + 1)


class Criterion:
    """
    Criterion bound to one dataset, memoised by mask.
    """

    def __init__(self, ds: Dataset, spec: CriterionSpec):
        self._ds = ds
        self._spec = spec
        self._cache: Dict[int, float] = {}

    @property
    def ds(self) -> Dataset:
        return self._ds

    @property
    def spec(self) -> CriterionSpec:
        return self._spec

    @property
    def d(self) -> int:
        return self._ds.d

    @property
    def evaluations(self) -> int:
        """
        Number of distinct masks evaluated.
        """
        return len(self._cache)

    def __call__(self, mask: SubsetMask) -> float:
        if mask.bits not in self._cache:
            self._cache[mask.bits] = criterion(self._ds, mask, self._spec)
        return self._cache[mask.bits]


@dataclass(frozen=True, eq=False)
class ExhaustiveResult:
    """
    Best mask and the criterion value of every mask. table has columns
    mask (integer bits), variables (1-based), size and score, ordered by
    mask.
    """
    best: SubsetMask
    best_score: float
    table: pd.DataFrame


def exhaustive_search(ds: Dataset, spec: CriterionSpec) -> ExhaustiveResult:
    """
    Evaluate the criterion on all 2^d subsets.

    Args:
        ds: Regression dataset with d <= 20
        spec: Penalty

    Returns:
        Argmin (lowest mask integer on ties) and the full table

    """
    if ds.d > EXHAUSTIVE_MAX_VARIABLES:
        raise ContractException(
            f'Exhaustive search is limited to {EXHAUSTIVE_MAX_VARIABLES} '
            f'variables, got {ds.d}'
        )
    total = 1 << ds.d
    logger.info(f'Evaluating all {total} subsets of {ds.d} variables')
    rows = []
    best, best_score = None, math.inf
    for bits in range(total):
        mask = SubsetMask(bits, ds.d)
        score = criterion(ds, mask, spec)
        rows.append((bits, mask.label(), mask.size, score))
        if best is None or score < best_score:
            best, best_score = mask, score
    table = pd.DataFrame(rows, columns=['mask', 'variables', 'size', 'score'])
    return ExhaustiveResult(best=best, best_score=best_score, table=table)


def group_gap(result: ExhaustiveResult, truth: SubsetMask) -> Tuple[pd.DataFrame, float]:
    """
    Split the exhaustive table into group I (masks containing every true
    variable) and group II (the rest).

    Returns:
        The table with an added group column ('I' or 'II') and the gap
        min F(group II) - max F(group I), positive when every group I
        subset beats every group II subset

    """
    table = result.table.copy()
    group_one = np.array([bits & truth.bits == truth.bits for bits in table['mask']])
    table['group'] = np.where(group_one, 'I', 'II')
    scores = table['score'].to_numpy()
    if group_one.all() or not group_one.any():
        return table, math.nan
    return table, float(scores[~group_one].min() - scores[group_one].max())
