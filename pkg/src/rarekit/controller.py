#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import os

from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from rarekit import config
from rarekit.config import RunConfig, parse_overrides
from rarekit.constants import Stream
from rarekit.data import (
    Dataset,
    SplitSpec,
    csv_columns,
    load_csv,
    load_features,
    split,
    write_csv,
)
from rarekit.exceptions import ConfigException, DimensionMismatchException
from rarekit.logger import KitLogger
from rarekit.persistence import Model, load_model, save_model
from rarekit.seeds import SeedTree
from rarekit.utils import message, write_table

logger = KitLogger()

# Run-level settings echoed in every manifest next to the command parameters
GLOBAL_KEYS = ('project_dir', 'out_dir', 'data_dir', 'seed', 'workers')


class Rarekit:
    """
    Rarekit controller class.
    """
    def __init__(self, command: Sequence[str], params: Mapping[str, Any]):
        """
        Constructor for Rarekit class. Binds one command to the loaded config,
        prepares the output directory and writes the run manifest before any
        work is done.

        Args:
            command (list): Command path, i.e. ['select'] or
                            ['experiments', 'fig5']
            params (dict): Resolved command parameters. A "seed" entry that is
                           not None replaces the master seed for this run

        """
        if not config.Config:
            raise ConfigException('Configuration has not been loaded')
        params = dict(params)
        seed = params.pop('seed', None)
        if seed is not None:
            logger.info(f'Command seed {seed} replaces master seed {config.Config.seed}')
            config.reseed(seed)
        clashes = sorted(set(params) & set(GLOBAL_KEYS))
        if clashes:
            raise ConfigException(f'Command parameters shadow run settings: {clashes}')
        resolved = {key: getattr(config.Config, key) for key in GLOBAL_KEYS}
        resolved.update(params)
        self._run_config = RunConfig(command, resolved)
        self._artifacts: List[str] = []

        os.makedirs(config.Config.out_dir, exist_ok=True)
        KitLogger.attach_file_handler()
        self._run_config.write(config.Config.manifest)
        logger.info(f' {" ".join(command)} '.center(80, '='))

    @property
    def run_config(self) -> RunConfig:
        """
        Fully resolved configuration of this run.
        """
        return self._run_config

    @property
    def artifacts(self) -> List[str]:
        """
        Paths of the tables written so far.
        """
        return list(self._artifacts)

    @staticmethod
    def stream_seed(stream: Stream) -> int:
        """
        Master seed of one of the run's random streams.

        Args:
            stream: Split, Model or Data stream

        Returns:
            64-bit seed

        """
        return SeedTree(config.Config.seed, (stream.value,)).seed

    @staticmethod
    def load(path: str, label: str, label_coding: Optional[str] = None,
             regression: bool = False) -> Dataset:
        """
        Loads a CSV dataset.

        Args:
            path: CSV file, relative paths also looked up in the data dir
            label: Name of the response column
            label_coding: Override string on the form "spam=1,ham=-1"
            regression: Keep the response as real numbers

        Returns:
            Dataset

        """
        coding = parse_overrides(label_coding, normalise_keys=False) if label_coding else None
        return load_csv(path, label, label_coding=coding, regression=regression)

    def datasets(self, data: str, label: str, label_coding: Optional[str] = None,
                 test_data: Optional[str] = None,
                 train_fraction: Optional[float] = None,
                 regression: bool = False) -> Tuple[Dataset, Optional[Dataset]]:
        """
        Training data and optional evaluation data. The evaluation part is
        either a second file or a random split of the first, seeded from the
        Split stream.

        Returns:
            Training dataset and evaluation dataset or None

        """
        if test_data and train_fraction is not None:
            raise ConfigException('Use either --test or --train-fraction, not both')
        ds = self.load(data, label, label_coding, regression)
        if test_data:
            test = self.load(test_data, label, label_coding, regression)
            if test.d != ds.d:
                raise ConfigException(
                    f'Test data has {test.d} features, training data has {ds.d}'
                )
            return ds, test
        if train_fraction is not None:
            train, test = split(ds, SplitSpec(train_fraction, self.stream_seed(Stream.Split)))
            logger.info(f'Split {ds.n} rows into {train.n} train and {test.n} test rows')
            return train, test
        return ds, None

    def write(self, frame: pd.DataFrame, name: str) -> str:
        """
        Writes a table to the output directory.

        Args:
            frame: Table
            name: File name, i.e. "select_frequencies.csv"

        Returns:
            Path written to

        """
        path = write_table(frame, os.path.join(config.Config.out_dir, name))
        self._artifacts.append(path)
        logger.info(f'Wrote {path}')
        return path

    def summary(self, name: str, values: Dict[str, Any]) -> str:
        """
        Logs a framed summary and writes it as a one-row table.

        Args:
            name: Table name without extension, i.e. "boost_summary"
            values: Summary values by column

        Returns:
            Path written to

        """
        width = max(len(key) for key in values)
        body = '\n'.join(f'{key.ljust(width)} : {value}' for key, value in values.items())
        logger.info(message(name.replace('_', ' ').title(), body))
        return self.write(pd.DataFrame([values]), f'{name}.csv')

    def write_dataset(self, ds: Dataset, name: str, label: str = 'y') -> str:
        """
        Writes a dataset as CSV to the output directory, readable by --data.

        Args:
            ds: Dataset
            name: File name, i.e. "toy.csv"
            label: Name of the response column

        Returns:
            Path written to

        """
        path = write_csv(ds, os.path.join(config.Config.out_dir, name), label)
        self._artifacts.append(path)
        logger.info(f'Wrote {ds!r} to {path}')
        return path

    def save_model(self, model: Model, name: str,
                   feature_names: Optional[Sequence[str]] = None) -> str:
        """
        Writes a fitted model to the output directory.

        Args:
            model: Fitted model
            name: File name, i.e. "forest_model.npz"
            feature_names: Names of the training columns

        Returns:
            Path written to

        """
        path = save_model(model, os.path.join(config.Config.out_dir, name), feature_names)
        self._artifacts.append(path)
        logger.info(f'Wrote {path}')
        return path

    @staticmethod
    def load_model(path: str, kind: str) -> Tuple[Model, Optional[Tuple[str, ...]]]:
        return load_model(path, kind)

    @staticmethod
    def load_new_points(path: str, label: str, label_coding: Optional[str] = None,
                        feature_names: Optional[Sequence[str]] = None
                        ) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """
        Points to apply a saved model to. The label column is optional; when
        present its labels are returned for evaluation.

        Args:
            path: CSV file
            label: Name of the label column
            label_coding: Override string on the form "spam=1,ham=-1"
            feature_names: Training column names recorded with the model

        Returns:
            Feature matrix and labels or None

        """
        if label in csv_columns(path):
            ds = Rarekit.load(path, label, label_coding)
            features, names, labels = ds.features, ds.feature_names, ds.labels
        else:
            features, names = load_features(path)
            labels = None
        if feature_names and tuple(feature_names) != tuple(names):
            if len(feature_names) != len(names):
                raise DimensionMismatchException(
                    f'Model was trained on {len(feature_names)} features, '
                    f'{path!r} has {len(names)}'
                )
            logger.warning(f'Column names of {path!r} differ from the training columns')
        return features, labels
