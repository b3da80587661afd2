#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from rarekit.data import Dataset
from rarekit.exceptions import ContractException, DimensionMismatchException
from rarekit.seeds import SeedTree


LEAF = -1
STUMP_TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DecisionTree:
    """
    Binary classification tree stored as parallel node arrays, root at 0.
    Internal nodes send x to the left child when x[feature] <= threshold.
    Leaves have feature LEAF and carry a label in {-1, +1}.
    """
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    label: np.ndarray
    n_features: int
    max_depth: Optional[int] = None

    @property
    def node_count(self) -> int:
        return self.feature.size

    @property
    def leaf_count(self) -> int:
        return int(np.sum(self.feature == LEAF))

    @property
    def depth(self) -> int:
        depths = np.zeros(self.node_count, dtype=np.int64)
        for node in range(self.node_count):
            if self.feature[node] != LEAF:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def apply(self, X) -> np.ndarray:
        """
        Index of the leaf every row of X lands in.
        """
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise DimensionMismatchException(
                f'Tree was grown on {self.n_features} features, got {X.shape[1]}'
            )
        nodes = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        active = self.feature[nodes] != LEAF
        while np.any(active):
            r = rows[active]
            n = nodes[active]
            go_left = X[r, self.feature[n]] <= self.threshold[n]
            nodes[r] = np.where(go_left, self.left[n], self.right[n])
            active = self.feature[nodes] != LEAF
        return nodes

    def predict(self, X) -> np.ndarray:
        return self.label[self.apply(X)]


def _freeze(values, dtype) -> np.ndarray:
    array = np.asarray(values, dtype=dtype)
    array.setflags(write=False)
    return array


def _majority(y: np.ndarray, w: np.ndarray) -> int:
    """
    Weighted majority label, ties to +1.
    """
    return 1 if np.sum(w[y > 0]) >= np.sum(w[y < 0]) else -1


def _midpoint(low: np.ndarray, high: np.ndarray) -> np.ndarray:
    """
    Thresholds strictly separating low from high, low < high elementwise.
    """
    mid = low + (high - low) / 2.0
    return np.where(mid < high, mid, low)


def constant_tree(label: int, n_features: int) -> DecisionTree:
    return DecisionTree(
        feature=_freeze([LEAF], np.int64),
        threshold=_freeze([0.0], np.float64),
        left=_freeze([LEAF], np.int64),
        right=_freeze([LEAF], np.int64),
        label=_freeze([label], np.int64),
        n_features=n_features,
        max_depth=0,
    )


def _check_weights(weights, n: int) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.float64).ravel()
    if weights.size != n:
        raise DimensionMismatchException(f'Got {weights.size} weights for {n} rows')
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise ContractException('Weights must be finite and nonnegative')
    if not weights.sum() > 0:
        raise ContractException('Weights sum to zero')
    return weights


def stump_errors(x: np.ndarray, y: np.ndarray, w: np.ndarray
                 ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Weighted errors of every stump on a single feature.

    Thresholds are midpoints between consecutive distinct values of x, in
    ascending order. A stump with polarity p predicts p when x > threshold
    and -p otherwise.

    Returns:
        thresholds, errors for polarity +1, errors for polarity -1

    """
    order = np.argsort(x, kind='stable')
    xs, ys, ws = x[order], y[order], w[order]
    boundary = np.flatnonzero(xs[:-1] < xs[1:])
    if boundary.size == 0:
        empty = np.empty(0)
        return empty, empty, empty
    pos_left = np.cumsum(np.where(ys > 0, ws, 0.0))[boundary]
    neg_left = np.cumsum(np.where(ys < 0, ws, 0.0))[boundary]
    pos_total = np.sum(ws[ys > 0])
    neg_total = np.sum(ws[ys < 0])
    # polarity +1: left predicted -1, right predicted +1
    plus = pos_left + (neg_total - neg_left)
    minus = neg_left + (pos_total - pos_left)
    return _midpoint(xs[boundary], xs[boundary + 1]), plus, minus


def fit_stump(ds: Dataset, weights) -> DecisionTree:
    """
    Depth-one tree minimising the weighted misclassification over every
    feature, midpoint threshold and polarity.

    Candidates are ordered by feature, then threshold, then polarity +1
    before -1. The first candidate within a tiny tolerance of the minimum
    wins, so the result is unique.

    Args:
        ds: Classification dataset
        weights: Nonnegative row weights with positive sum

    Returns:
        Stump, or a single leaf when every feature is constant

    """
    y = ds.labels
    w = _check_weights(weights, ds.n)
    candidates = []
    for j in range(ds.d):
        thresholds, plus, minus = stump_errors(ds.features[:, j], y, w)
        if thresholds.size:
            candidates.append((j, thresholds, plus, minus))
    if not candidates:
        return constant_tree(_majority(y, w), ds.d)

    best = min(min(plus.min(), minus.min()) for _, _, plus, minus in candidates)
    tol = STUMP_TIE_TOL * max(1.0, w.sum())
    for j, thresholds, plus, minus in candidates:
        for k in range(thresholds.size):
            for polarity, errors in ((1, plus), (-1, minus)):
                if errors[k] <= best + tol:
                    return DecisionTree(
                        feature=_freeze([j, LEAF, LEAF], np.int64),
                        threshold=_freeze([thresholds[k], 0.0, 0.0], np.float64),
                        left=_freeze([1, LEAF, LEAF], np.int64),
                        right=_freeze([2, LEAF, LEAF], np.int64),
                        label=_freeze([0, -polarity, polarity], np.int64),
                        n_features=ds.d,
                        max_depth=1,
                    )


def _best_split(x: np.ndarray, y: np.ndarray, w: np.ndarray
                ) -> Optional[Tuple[float, float]]:
    """
    Gini-best threshold on one feature as (weighted child impurity,
    threshold), or None if the feature is constant on the node.
    """
    order = np.argsort(x, kind='stable')
    xs, ys, ws = x[order], y[order], w[order]
    boundary = np.flatnonzero(xs[:-1] < xs[1:])
    if boundary.size == 0:
        return None
    pos = np.cumsum(np.where(ys > 0, ws, 0.0))
    tot = np.cumsum(ws)
    pos_left, w_left = pos[boundary], tot[boundary]
    pos_right, w_right = pos[-1] - pos_left, tot[-1] - w_left
    # weight * gini = 2 * pos * neg / weight on each side
    impurity = (
        2.0 * pos_left * (w_left - pos_left) / w_left
        + 2.0 * pos_right * (w_right - pos_right) / w_right
    )
    k = int(np.argmin(impurity))
    threshold = _midpoint(xs[boundary[k]], xs[boundary[k] + 1])
    return float(impurity[k]), float(threshold)


class _TreeGrower:
    """
    Grows a tree depth first. Node ids are assigned in creation order and
    seed the per-node feature draw.
    """

    def __init__(self, ds: Dataset, weights: np.ndarray, m: int, seed: int,
                 max_depth: Optional[int]):
        self.X = ds.features
        self.y = ds.labels
        self.w = weights
        self.m = m
        self.seed = seed
        self.max_depth = max_depth
        self.feature: List[int] = []
        self.threshold: List[float] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.label: List[int] = []

    def _new_node(self) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.label.append(0)
        return len(self.feature) - 1

    def _choose_split(self, node: int, rows: np.ndarray) -> Optional[Tuple[int, float]]:
        d = self.X.shape[1]
        features = SeedTree(self.seed, (node,)).rng().permutation(d)
        best = None
        for position, j in enumerate(features):
            if position >= self.m and best is not None:
                break
            split = _best_split(self.X[rows, j], self.y[rows], self.w[rows])
            if split is None:
                continue
            if best is None or split[0] < best[0]:
                best = (split[0], int(j), split[1])
        if best is None:
            return None
        return best[1], best[2]

    def grow(self) -> DecisionTree:
        root = self._new_node()
        stack = [(root, np.flatnonzero(self.w > 0), 0)]
        while stack:
            node, rows, depth = stack.pop()
            y, w = self.y[rows], self.w[rows]
            self.label[node] = _majority(y, w)
            if np.all(y == y[0]):
                continue
            if self.max_depth is not None and depth >= self.max_depth:
                continue
            split = self._choose_split(node, rows)
            if split is None:
                continue
            j, threshold = split
            go_left = self.X[rows, j] <= threshold
            left, right = self._new_node(), self._new_node()
            self.feature[node] = j
            self.threshold[node] = threshold
            self.left[node] = left
            self.right[node] = right
            self.label[node] = 0
            stack.append((right, rows[~go_left], depth + 1))
            stack.append((left, rows[go_left], depth + 1))

        return DecisionTree(
            feature=_freeze(self.feature, np.int64),
            threshold=_freeze(self.threshold, np.float64),
            left=_freeze(self.left, np.int64),
            right=_freeze(self.right, np.int64),
            label=_freeze(self.label, np.int64),
            n_features=self.X.shape[1],
            max_depth=self.max_depth,
        )


def fit_tree(ds: Dataset, bootstrap_sample: Optional[Sequence[int]] = None,
             m: Optional[int] = None, seed: int = 0,
             max_depth: Optional[int] = None, weights=None) -> DecisionTree:
    """
    Grow an unpruned Gini classification tree.

    Before each split a uniformly random set of m features is drawn from the
    node's own stream SeedTree(seed, (node_id,)); the best split over those
    features is taken, whether or not it lowers the impurity. If none of the
    m features can split the node, the remaining features are tried in the
    same random order. Nodes stop splitting when pure, unsplittable or at
    max_depth.

    Args:
        ds: Classification dataset
        bootstrap_sample: Row indices, repeats allowed. Defaults to every
                          row once
        m: Features drawn per split, 1 <= m <= d. Defaults to d
        seed: Seed of the per-node feature draws
        max_depth: Depth limit, None for maximal trees
        weights: Optional row weights multiplied into the sample counts

    Returns:
        Fitted tree

    """
    m = ds.d if m is None else int(m)
    if not 1 <= m <= ds.d:
        raise ContractException(f'Need 1 <= m <= d = {ds.d}, got m={m}')
    if max_depth is not None and max_depth < 0:
        raise ContractException(f'Depth limit must be nonnegative, got {max_depth}')
    if bootstrap_sample is None:
        counts = np.ones(ds.n)
    else:
        sample = np.asarray(bootstrap_sample, dtype=np.int64).ravel()
        if sample.size == 0:
            raise ContractException('Cannot grow a tree on an empty sample')
        if sample.min() < 0 or sample.max() >= ds.n:
            raise ContractException('Sample indices out of range')
        counts = np.bincount(sample, minlength=ds.n).astype(np.float64)
    if weights is not None:
        counts = counts * _check_weights(weights, ds.n)
    if not counts.sum() > 0:
        raise ContractException('Cannot grow a tree on an empty sample')
    return _TreeGrower(ds, counts, m, seed, max_depth).grow()
