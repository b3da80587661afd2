#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import click
import numpy as np
import pandas as pd

from rarekit.constants import Stream
from rarekit.data import SplitSpec, split
from rarekit.ensembles.forest import forest_grid
from rarekit.experiments.base_experiment import BaseExperiment
from rarekit.kernels.svm import sensitivity_grid
from rarekit.logger import KitLogger
from rarekit.seeds import SeedTree
from rarekit.toys import spam_fallback
from rarekit.utils import parse_list

logger = KitLogger()

# 1536 training rows out of the 4601 spam emails
SPAM_TRAIN_FRACTION = 1536 / 4601

DEFAULT_SUBSET_SIZES = (1, 2, 3, 5, 7, 10, 15, 20)


def grid_ranges(grid: pd.DataFrame, row: str, column: str):
    """
    Error range along each axis through the best cell of a two-parameter
    grid: (range over column at the best row value, range over row at the
    best column value).
    """
    best = grid.loc[grid['errors'].idxmin()]
    along_column = grid.loc[grid[row] == best[row], 'errors']
    along_row = grid.loc[grid[column] == best[column], 'errors']
    return (int(along_column.max() - along_column.min()),
            int(along_row.max() - along_row.min()))


def B_spread(forest: pd.DataFrame) -> float:
    """
    Largest spread of the forest errors across B for a fixed m, relative to
    their mean.
    """
    stats = forest.groupby('m')['errors'].agg(['min', 'max', 'mean'])
    spread = (stats['max'] - stats['min']) / stats['mean'].replace(0, np.nan)
    return float(spread.max()) if spread.notna().any() else 0.0


class SensitivityExperiment(BaseExperiment):
    """
    Test error of the gaussian-kernel classifier over (gamma, h) and of the
    random forest over (m, B) on one train/test split.
    """

    name = 'fig3'
    help = 'Tuning sensitivity of kernel classifier and random forest'
    params = [
        click.Option(['--data'], help='Spam CSV; a synthetic stand-in is used if omitted'),
        click.Option(['--label'], default='y', show_default=True,
                     help='Name of the response column'),
        click.Option(['--label-coding'], help='Raw label to -1/+1 mapping, i.e. "spam=1,ham=-1"'),
        click.Option(['--train-fraction'], type=float, default=SPAM_TRAIN_FRACTION,
                     show_default=True, help='Share of rows used for training'),
        click.Option(['--gammas'], default='0.1,1,10,100', show_default=True,
                     help='Cost parameters'),
        click.Option(['--hs'], default='0.001,0.003,0.01,0.03,0.1,0.3,1', show_default=True,
                     help='Gaussian kernel bandwidths'),
        click.Option(['--epochs'], type=int, default=10, show_default=True,
                     help='Training epochs per classifier'),
        click.Option(['--ms'], help='Forest subset sizes [default: 1,2,3,5,7,10,15,20,d]'),
        click.Option(['--Bs', 'Bs'], default='100,200,400', show_default=True,
                     help='Forest sizes'),
    ]

    def run(self, data, label, label_coding, train_fraction, gammas, hs, epochs, ms, Bs):
        if data:
            ds = self.kit.load(data, label, label_coding)
        else:
            logger.info('No spam data given, using the synthetic stand-in')
            ds = spam_fallback(self.kit.stream_seed(Stream.Data))
        train, test = split(ds, SplitSpec(train_fraction, self.kit.stream_seed(Stream.Split)))

        model_seed = self.kit.stream_seed(Stream.Model)
        svm = sensitivity_grid(train, test, parse_list(gammas), parse_list(hs),
                               seed=SeedTree(model_seed, (1,)).seed, epochs=epochs)
        self.kit.write(svm, 'fig3_svm.csv')

        if ms:
            subset_sizes = parse_list(ms, int)
        else:
            subset_sizes = [m for m in DEFAULT_SUBSET_SIZES if m < ds.d] + [ds.d]
        forest = forest_grid(train, test, subset_sizes, parse_list(Bs, int),
                             seed=SeedTree(model_seed, (2,)).seed)
        self.kit.write(forest, 'fig3_forest.csv')

        h_range, gamma_range = grid_ranges(svm, 'gamma', 'h')
        m_range, B_range = grid_ranges(forest, 'B', 'm')
        self.kit.summary('fig3_summary', {
            'dataset': data or 'synthetic',
            'n_train': train.n,
            'n_test': test.n,
            'svm_best_errors': int(svm['errors'].min()),
            'svm_h_range': h_range,
            'svm_gamma_range': gamma_range,
            'forest_best_errors': int(forest['errors'].min()),
            'forest_m_range': m_range,
            'forest_B_range': B_range,
            'forest_B_spread': B_spread(forest),
        })
