#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from __future__ import annotations

import os
import yaml

from typing import Any, Dict, Optional, Sequence, Union

from rarekit.constants import (
    APP_DATA_TOKEN,
    DATA_DIR_ENV,
    DEFAULT_PROJECT_DIR,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    MANIFEST_NAME,
)
from rarekit.exceptions import ConfigException


Config = None


class _Config:

    def __init__(self, project_dir: str, out_dir: str, data_dir: str,
                 seed: int, workers: int):
        """
        Gets config attributes from command line arguments or environment
        variables.

        Environment variables are prefixed with "RAREKIT" and otherwise match
        upper cased versions of command line arguments. "--out-dir" becomes
        "RAREKIT_OUT_DIR" for instance.

        Args:
            project_dir (str): Project directory
            out_dir (str): Directory for CSV artifacts and the run manifest
            data_dir (str): Fallback directory for relative dataset paths
            seed (int): Master seed for every stochastic operation
            workers (int): Number of parallel workers

        """
        if seed < 0 or seed >= 2 ** 64:
            raise ConfigException(f'Seed must be a 64-bit unsigned integer, got {seed}')
        if workers < 1:
            raise ConfigException(f'Workers must be at least 1, got {workers}')

        self._project_dir = project_dir or DEFAULT_PROJECT_DIR
        self._out_dir = out_dir or os.path.join(self._project_dir, 'output')
        self._data_dir = data_dir or os.getenv(DATA_DIR_ENV) or self._project_dir
        self._seed = int(seed)
        self._workers = int(workers)

    @property
    def project_dir(self) -> str:
        """
        Project directory.
        """
        return self._project_dir

    @property
    def out_dir(self) -> str:
        """
        Directory for CSV artifacts and the run manifest.
        """
        return self._out_dir

    @property
    def data_dir(self) -> str:
        """
        Fallback directory for relative dataset paths.
        """
        return self._data_dir

    @property
    def seed(self) -> int:
        """
        Master seed.
        """
        return self._seed

    @property
    def workers(self) -> int:
        """
        Number of parallel workers. Results do not depend on it.
        """
        return self._workers

    @property
    def manifest(self) -> str:
        """
        Path of the manifest echoing the resolved run configuration.
        """
        return os.path.join(self._out_dir, MANIFEST_NAME)

    @property
    def log_dir(self) -> str:
        """
        Log directory.
        """
        return os.path.join(self._project_dir, 'logs')

    @property
    def logs(self) -> str:
        """
        Log file.
        """
        return os.path.join(self.log_dir, f'{APP_DATA_TOKEN}.log')


def load(project_dir=None, out_dir=None, data_dir=None, seed=DEFAULT_SEED,
         workers=DEFAULT_WORKERS):
    """
    Function to populate config and assign it to rarekit.config.Config.

    Args:
        project_dir (str): Project directory
        out_dir (str): Directory for CSV artifacts and the run manifest
        data_dir (str): Fallback directory for relative dataset paths
        seed (int): Master seed
        workers (int): Number of parallel workers

    """
    global Config
    Config = _Config(
        project_dir=project_dir,
        out_dir=out_dir,
        data_dir=data_dir,
        seed=seed,
        workers=workers,
    )
    return Config


def reseed(seed: int):
    """
    Replace the master seed of the loaded config, keeping every other
    setting.

    Args:
        seed (int): New master seed

    """
    if not Config:
        raise ConfigException('Configuration has not been loaded')
    return load(
        project_dir=Config.project_dir,
        out_dir=Config.out_dir,
        data_dir=Config.data_dir,
        seed=int(seed),
        workers=Config.workers,
    )


def parse_overrides(overrides: Union[None, str, Sequence[str]],
                    normalise_keys: bool = True) -> Dict[str, Any]:
    """
    Convert overrides to a dict. A string on the form "key=value,key=value"
    is split on commas; a sequence holds one "key=value" pair per item, so
    values may contain commas. Values are parsed as YAML scalars, so numbers
    and booleans keep their type.

    Args:
        overrides: Override string or sequence of pairs
        normalise_keys: Turn dashes in keys into underscores, matching
                        option names

    Returns:
        Parsed overrides

    """
    parsed = {}
    if not overrides:
        return parsed
    if isinstance(overrides, str):
        overrides = overrides.split(',')
    for override in overrides:
        if '=' not in override:
            raise ConfigException(f'Expected key=value, got {override!r}')
        key, value = override.split('=', 1)
        key = key.strip()
        if normalise_keys:
            key = key.replace('-', '_')
        parsed[key] = yaml.safe_load(value)
    return parsed


def read_config_file(path: str) -> Dict[str, Any]:
    """
    Read a flat key/value config file.

    Args:
        path: Path to YAML file with one "key: value" pair per line

    Returns:
        Config values by key

    """
    if not os.path.isfile(path):
        raise ConfigException(f'Config file {path!r} does not exist')
    with open(path, 'r') as stream:
        raw = yaml.safe_load(stream) or {}
    if not isinstance(raw, dict):
        raise ConfigException(f'Config file {path!r} must hold a mapping')
    for key, value in raw.items():
        if isinstance(value, dict):
            raise ConfigException(
                f'Config file {path!r} must be flat, key {key!r} is nested'
            )
    return {str(k).replace('-', '_'): v for k, v in raw.items()}


class RunConfig:
    """
    Fully resolved configuration of one command line invocation. Written as a
    manifest next to the artifacts so the run can be replayed.
    """

    def __init__(self, command: Sequence[str], params: Dict[str, Any]):
        self._command = list(command)
        self._params = dict(params)

    def __eq__(self, other):
        return type(self) == type(other) and self.__dict__ == other.__dict__

    def __repr__(self):
        return f'RunConfig(command={self._command!r}, params={self._params!r})'

    @property
    def command(self) -> list:
        """
        Command path, i.e. ['experiments', 'fig5'].
        """
        return self._command

    @property
    def params(self) -> dict:
        """
        Resolved parameters by name.
        """
        return self._params

    def to_dict(self) -> dict:
        data = {'command': ' '.join(self._command)}
        for key, value in sorted(self._params.items()):
            if isinstance(value, tuple):
                value = list(value)
            data[key] = value
        return data

    def write(self, path: str):
        """
        Write manifest to disk as flat YAML.

        Args:
            path: Manifest path

        """
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, 'w') as stream:
            yaml.safe_dump(self.to_dict(), stream, default_flow_style=None,
                           sort_keys=False)

    @classmethod
    def from_file(cls, path: str) -> RunConfig:
        """
        Read a manifest written by RunConfig.write().

        Args:
            path: Manifest path

        Returns:
            Run config

        """
        with open(path, 'r') as stream:
            raw = yaml.safe_load(stream) or {}
        command = str(raw.pop('command', '')).split()
        if not command:
            raise ConfigException(f'Manifest {path!r} does not name a command')
        return cls(command=command, params=raw)
