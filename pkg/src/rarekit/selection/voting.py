#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from rarekit.constants import DEFAULT_GENERATIONS, DEFAULT_TAU, DEFAULT_UNIVERSES
from rarekit.data import Dataset
from rarekit.exceptions import ContractException
from rarekit.exchange import JobExchange
from rarekit.logger import KitLogger
from rarekit.seeds import SeedTree
from rarekit.selection.criterion import CriterionSpec, SubsetMask
from rarekit.selection.evolution import GAParams, UniverseResult, evolve, stepwise

logger = KitLogger()


@dataclass(frozen=True, eq=False)
class VoteTally:
    """
    Per-variable membership counts over B selected masks. A variable is
    selected when it shows up in at least ceil(tau B) of them.
    """
    frequencies: np.ndarray
    B: int
    tau: float
    selected: SubsetMask
    masks: Tuple[SubsetMask, ...] = ()
    feature_names: Optional[Tuple[str, ...]] = None

    @property
    def threshold(self) -> int:
        return vote_threshold(self.tau, self.B)

    def to_frame(self) -> pd.DataFrame:
        """
        One row per variable: name, 1-based index, frequency and whether it
        is selected.
        """
        d = self.frequencies.size
        names = self.feature_names or tuple(f'x{j + 1}' for j in range(d))
        return pd.DataFrame({
            'variable': list(names),
            'index': np.arange(1, d + 1),
            'frequency': self.frequencies,
            'selected': [j in self.selected for j in range(d)],
        })


def vote_threshold(tau: float, B: int) -> int:
    # strip float noise first: 0.1 * 30 == 3.0000000000000004
    return int(math.ceil(round(tau * B, 12)))


def tally(masks: Sequence[SubsetMask], tau: float = DEFAULT_TAU,
          feature_names: Optional[Sequence[str]] = None) -> VoteTally:
    """
    Majority vote over masks.

    Args:
        masks: Selected masks, all over the same d variables
        tau: Vote fraction in (0, 1]
        feature_names: Optional variable names

    Returns:
        Vote tally

    """
    if not masks:
        raise ContractException('Cannot tally zero masks')
    if not 0 < tau <= 1:
        raise ContractException(f'Vote fraction tau must be in (0, 1], got {tau}')
    d = masks[0].d
    frequencies = np.zeros(d, dtype=np.int64)
    for mask in masks:
        if mask.d != d:
            raise ContractException('Masks cover different numbers of variables')
        frequencies += mask.to_array()
    B = len(masks)
    selected = SubsetMask.from_array(frequencies >= vote_threshold(tau, B))
    return VoteTally(
        frequencies=frequencies,
        B=B,
        tau=tau,
        selected=selected,
        masks=tuple(masks),
        feature_names=tuple(feature_names) if feature_names is not None else None,
    )


def _run_universe(job) -> UniverseResult:
    ds, spec, ga, generations, seed = job
    return evolve(ds, spec, ga=ga, generations=generations, seed=seed)


def parallel_universes(ds: Dataset, spec: CriterionSpec,
                       B: int = DEFAULT_UNIVERSES,
                       generations: int = DEFAULT_GENERATIONS,
                       tau: float = DEFAULT_TAU, seed: int = 0,
                       ga: GAParams = GAParams(),
                       workers: Optional[int] = None
                       ) -> Tuple[VoteTally, List[UniverseResult]]:
    """
    Run B short, independent evolutionary searches and vote on their best
    subsets.

    Args:
        ds: Regression dataset
        spec: Penalty
        B: Number of universes
        generations: Generations per universe
        tau: Vote fraction
        seed: Master seed. Universe b runs with SeedTree(seed, (b,))
        ga: Genetic algorithm settings
        workers: Number of universes run concurrently

    Returns:
        Vote tally and every universe's result, in universe order

    """
    if B < 1:
        raise ContractException(f'Need at least one universe, got B={B}')
    jobs = [(ds, spec, ga, generations, SeedTree(seed, (b,)).seed) for b in range(B)]
    logger.info(f'Evolving {B} universes for {generations} generations')
    universes = JobExchange.map(_run_universe, jobs, workers=workers)
    votes = tally([u.best_mask for u in universes], tau, ds.feature_names)
    return votes, universes


def _run_replicate(job) -> SubsetMask:
    ds, spec, seed = job
    rows = SeedTree(seed).rng().integers(0, ds.n, ds.n)
    mask, _ = stepwise(ds.subset(rows), spec)
    return mask


def bagged_stepwise(ds: Dataset, spec: CriterionSpec, B: int = DEFAULT_UNIVERSES,
                    seed: int = 0, tau: float = DEFAULT_TAU,
                    workers: Optional[int] = None) -> VoteTally:
    """
    Vote over stepwise searches on B bootstrap resamples.

    Args:
        ds: Regression dataset
        spec: Penalty
        B: Number of bootstrap replicates
        seed: Master seed. Replicate b resamples with SeedTree(seed, (b,))
        tau: Vote fraction
        workers: Number of replicates run concurrently

    Returns:
        Vote tally

    """
    if B < 1:
        raise ContractException(f'Need at least one replicate, got B={B}')
    jobs = [(ds, spec, SeedTree(seed, (b,)).seed) for b in range(B)]
    masks = JobExchange.map(_run_replicate, jobs, workers=workers)
    return tally(masks, tau, ds.feature_names)
