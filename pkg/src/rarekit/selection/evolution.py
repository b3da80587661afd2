#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Search engines over variable subsets: a binary genetic algorithm and a
first-improvement stepwise search.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from rarekit.constants import (
    DEFAULT_CROSSOVER_RATE,
    DEFAULT_GENERATIONS,
    DEFAULT_POPULATION,
)
from rarekit.data import Dataset
from rarekit.exceptions import ContractException
from rarekit.logger import KitLogger
from rarekit.seeds import SeedTree
from rarekit.selection.criterion import Criterion, CriterionSpec, SubsetMask

logger = KitLogger()


@dataclass(frozen=True)
class GAParams:
    """
    Genetic algorithm settings.

    Attributes:
        population: Population size, even
        crossover_rate: Probability that uniform crossover swaps a gene
        mutation_rate: Per-bit flip probability, 1/d when None
        elitism: Number of best individuals copied unchanged
        init_rate: Probability that a bit of the initial population is set

    """
    population: int = DEFAULT_POPULATION
    crossover_rate: float = DEFAULT_CROSSOVER_RATE
    mutation_rate: Optional[float] = None
    elitism: int = 1
    init_rate: float = 0.5

    def __post_init__(self):
        if self.population < 2 or self.population % 2:
            raise ContractException(f'Population must be even and >= 2, got {self.population}')
        if not 0 <= self.elitism < self.population:
            raise ContractException(
                f'Elitism must be in [0, population), got {self.elitism}'
            )
        for name in ('crossover_rate', 'init_rate'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ContractException(f'{name} must be a probability')
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ContractException('mutation_rate must be a probability')


@dataclass(frozen=True)
class UniverseResult:
    """
    Outcome of one evolutionary run.

    Attributes:
        best_mask: Best mask ever evaluated
        best_score: Its criterion value
        generations_run: Number of generations bred
        universe_seed: Seed of the run
        history: Best-ever score after the initial population and after
                 every generation

    """
    best_mask: SubsetMask
    best_score: float
    generations_run: int
    universe_seed: int
    history: Tuple[float, ...] = ()


def _to_mask(row: np.ndarray) -> SubsetMask:
    return SubsetMask.from_array(row)


def _tournament(rng: np.random.Generator, scores: np.ndarray) -> int:
    first, second = rng.integers(0, scores.size, 2)
    return int(first) if scores[first] <= scores[second] else int(second)


def evolve(ds: Dataset, spec: CriterionSpec, ga: GAParams = GAParams(),
           generations: int = DEFAULT_GENERATIONS, seed: int = 0,
           initial: Optional[Sequence[SubsetMask]] = None,
           objective: Optional[Criterion] = None) -> UniverseResult:
    """
    Minimise the criterion with a binary genetic algorithm.

    Each generation keeps the elite, then breeds the rest of the population
    from parents chosen by binary tournament, with uniform crossover and
    per-bit mutation.

    Args:
        ds: Regression dataset
        spec: Penalty
        ga: Genetic algorithm settings
        generations: Number of generations, at least 1
        seed: Seed of the run
        initial: Optional masks placed first in the initial population; the
                 rest is drawn at random
        objective: Optional memoised criterion to share between runs on the
                   same data

    Returns:
        Best mask ever seen with its score

    """
    if generations < 1:
        raise ContractException(f'Need at least one generation, got {generations}')
    objective = objective or Criterion(ds, spec)
    d = ds.d
    size = ga.population
    mutation = ga.mutation_rate if ga.mutation_rate is not None else 1.0 / d
    rng = SeedTree(seed).rng()

    population = rng.random((size, d)) < ga.init_rate
    if initial:
        if len(initial) > size:
            raise ContractException(f'Got {len(initial)} initial masks for a population of {size}')
        for i, mask in enumerate(initial):
            population[i] = mask.to_array()

    def evaluate(rows: np.ndarray) -> np.ndarray:
        return np.array([objective(_to_mask(row)) for row in rows])

    scores = evaluate(population)
    best_index = int(np.argmin(scores))
    best_row, best_score = population[best_index].copy(), float(scores[best_index])
    history = [best_score]

    for generation in range(1, generations + 1):
        elite = np.argsort(scores, kind='stable')[:ga.elitism]
        children = [population[i].copy() for i in elite]
        while len(children) < size:
            mother = population[_tournament(rng, scores)]
            father = population[_tournament(rng, scores)]
            swap = rng.random(d) < ga.crossover_rate
            first = np.where(swap, father, mother)
            second = np.where(swap, mother, father)
            for child in (first, second):
                child = child ^ (rng.random(d) < mutation)
                if len(children) < size:
                    children.append(child)
        population = np.array(children)
        scores = evaluate(population)

        index = int(np.argmin(scores))
        if scores[index] < best_score:
            best_row, best_score = population[index].copy(), float(scores[index])
        history.append(best_score)
        logger.debug(f'Generation {generation}: best {best_score:.6g}')

    return UniverseResult(
        best_mask=_to_mask(best_row),
        best_score=best_score,
        generations_run=generations,
        universe_seed=seed,
        history=tuple(history),
    )


def stepwise(ds: Dataset, spec: CriterionSpec,
             start: Optional[SubsetMask] = None) -> Tuple[SubsetMask, float]:
    """
    Forward-backward stepwise search with first-improvement sweeps.

    Each sweep toggles variables 1..d in turn, adding absent ones and
    dropping present ones, and accepts any toggle that lowers the
    criterion. Sweeps repeat until one completes without a change.

    Args:
        ds: Regression dataset
        spec: Penalty
        start: Starting mask, empty by default

    Returns:
        Local optimum and its score

    """
    objective = Criterion(ds, spec)
    current = start or SubsetMask(0, ds.d)
    score = objective(current)
    improved = True
    while improved:
        improved = False
        for j in range(ds.d):
            candidate = current.toggle(j)
            if candidate.size + 1 >= ds.n:
                continue
            candidate_score = objective(candidate)
            if candidate_score < score:
                current, score = candidate, candidate_score
                improved = True
    return current, score
