#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import click

from rarekit.constants import Stream
from rarekit.exceptions import ConfigException
from rarekit.experiments.base_experiment import BaseExperiment
from rarekit.toys import (
    TRUE_VARIABLES,
    gaussian_mixture,
    pga_toy,
    separated_clusters,
    spam_fallback,
    spherical_toy,
)
from rarekit.utils import parse_list

TOY_KINDS = ('regression', 'spherical', 'mixture', 'clusters', 'spam')


class ToyDataExperiment(BaseExperiment):
    """
    Writes one of the synthetic datasets as CSV, ready for --data. Drawn
    from the Data stream, so the same seed always writes the same file.
    """

    name = 'toy'
    help = 'Write a synthetic dataset as CSV'
    params = [
        click.Option(['--kind'], type=click.Choice(TOY_KINDS), default='regression',
                     show_default=True, help='Which generator to use'),
        click.Option(['--n'], type=int, help='Number of rows  [default: per kind]'),
        click.Option(['--d'], type=int,
                     help='Number of predictors, regression, clusters and spam only'),
        click.Option(['--truth'], default=','.join(str(t) for t in TRUE_VARIABLES),
                     show_default=True, help='1-based true variables of the regression toy'),
        click.Option(['--noise'], type=float, default=1.0, show_default=True,
                     help='Noise standard deviation of the regression toy'),
        click.Option(['--file', 'file_name'], default='toy.csv', show_default=True,
                     help='File name in the output directory'),
    ]

    def run(self, kind: str, n: int, d: int, truth: str, noise: float, file_name: str):
        seed = self.kit.stream_seed(Stream.Data)
        sizes = {key: value for key, value in (('n', n), ('d', d)) if value is not None}
        if 'd' in sizes and kind in ('spherical', 'mixture'):
            raise ConfigException(f'The {kind} toy lives in the plane, drop --d')

        if kind == 'regression':
            ds = pga_toy(seed, truth=parse_list(truth, int), noise=noise, **sizes)
        elif kind == 'spherical':
            ds = spherical_toy(seed, **sizes)
        elif kind == 'mixture':
            ds = gaussian_mixture(seed, **sizes)
        elif kind == 'clusters':
            ds = separated_clusters(seed, **sizes)
        else:
            ds = spam_fallback(seed, **sizes)

        path = self.kit.write_dataset(ds, file_name)
        self.kit.summary('toy_summary', {
            'kind': kind,
            'n': ds.n,
            'd': ds.d,
            'file': path,
        })
