#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import click
import numpy as np
import pandas as pd

from rarekit.constants import CriterionKind, Stream
from rarekit.experiments.base_experiment import BaseExperiment
from rarekit.logger import KitLogger
from rarekit.seeds import SeedTree
from rarekit.selection.criterion import CriterionSpec, SubsetMask
from rarekit.selection.evolution import GAParams
from rarekit.selection.voting import parallel_universes
from rarekit.toys import pga_toy
from rarekit.utils import message, parse_list

logger = KitLogger()


class UniversesExperiment(BaseExperiment):
    """
    Variable frequencies of parallel evolution on the regression toy for a
    growing number of universes. Every (B, replicate) pair runs with its own
    seed on the same data.
    """

    name = 'fig5'
    help = 'Parallel evolution for an increasing number of universes'
    params = [
        click.Option(['--n'], type=int, default=50, show_default=True,
                     help='Number of observations'),
        click.Option(['--d'], type=int, default=10, show_default=True,
                     help='Number of predictors'),
        click.Option(['--truth'], default='2,5,8', show_default=True,
                     help='1-based indices of the true predictors'),
        click.Option(['--Bs', 'Bs'], default='1,5,10', show_default=True,
                     help='Numbers of universes'),
        click.Option(['--replicates'], type=int, default=20, show_default=True,
                     help='Repetitions per number of universes'),
        click.Option(['--generations'], type=int, default=6, show_default=True,
                     help='Generations per universe'),
        click.Option(['--tau'], type=float, default=0.5, show_default=True,
                     help='Vote fraction'),
        click.Option(['--population'], type=int, default=50, show_default=True,
                     help='Population size'),
        click.Option(['--criterion'], type=click.Choice([k.value for k in CriterionKind]),
                     default=CriterionKind.AIC.value, show_default=True,
                     help='Selection criterion'),
        click.Option(['--gamma'], type=float, help='Penalty of the custom criterion'),
    ]

    def run(self, n, d, truth, Bs, replicates, generations, tau, population,
            criterion, gamma):
        true_variables = parse_list(truth, int)
        ds = pga_toy(self.kit.stream_seed(Stream.Data), n=n, d=d, truth=true_variables)
        spec = CriterionSpec.for_kind(criterion, ds.n, gamma)
        truth_mask = SubsetMask.from_indices([t - 1 for t in true_variables], d)
        spurious = [j for j in range(d) if j not in truth_mask]
        ga = GAParams(population=population)
        model_seed = self.kit.stream_seed(Stream.Model)

        frames, summary = [], []
        for B in parse_list(Bs, int):
            correct, true_frequencies, max_spurious = 0, [], []
            for replicate in range(1, replicates + 1):
                votes, _ = parallel_universes(
                    ds, spec, B=B, generations=generations, tau=tau,
                    seed=SeedTree(model_seed, (B, replicate)).seed, ga=ga,
                )
                frame = votes.to_frame()
                frame.insert(0, 'replicate', replicate)
                frame.insert(0, 'B', B)
                frames.append(frame)
                correct += votes.selected == truth_mask
                true_frequencies.extend(votes.frequencies[list(truth_mask.indices)])
                if spurious:
                    max_spurious.append(int(votes.frequencies[spurious].max()))
            summary.append({
                'B': B,
                'replicates': replicates,
                'correct': int(correct),
                'median_true_frequency': float(np.median(true_frequencies)),
                'median_max_spurious': float(np.median(max_spurious)) if max_spurious else 0.0,
            })

        self.kit.write(pd.concat(frames, ignore_index=True), 'fig5_frequencies.csv')
        table = pd.DataFrame(summary)
        logger.info(message('Fig5 Summary', table.to_string(index=False)))
        self.kit.write(table, 'fig5_summary.csv')
